#pragma once

#include <stdexcept>
#include <string>

namespace mbo {

enum class ErrorKind {
  InvalidArgument,
  GridMismatch,
  Clearance,
  Precondition,
  BoundaryTouch,
  Header,
  SizeMismatch,
  FocalCrossing,
  OpenContour,
  EmptySet,
  NotOnContour,
  DegenerateFit,
  Config,
  Io,
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so callers (and the
/// CLI) can branch on the category without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace mbo

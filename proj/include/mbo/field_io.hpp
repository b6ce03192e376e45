#pragma once

#include <iosfwd>
#include <string>
#include <variant>

#include "mbo/grid.hpp"

namespace mbo {

/// Field file layout: the 8 bytes "MBOFLD01", one UTF-8 JSON header line
/// {"dim","cells_per_axis","extent","dtype"} terminated by '\n', then the raw
/// little-endian row-major payload (f64 for scalar fields, u8 for phases).
inline constexpr char kFieldMagic[9] = "MBOFLD01";

void write_field(const ScalarField& field, std::ostream& out);
void write_field(const PhaseField& phase, std::ostream& out);
void write_field(const ScalarField& field, const std::string& path);
void write_field(const PhaseField& phase, const std::string& path);

using AnyField = std::variant<ScalarField, PhaseField>;

/// Throws Error(Header) for a bad magic/header and Error(SizeMismatch) for a
/// payload of the wrong length.
AnyField read_field(std::istream& in);
AnyField read_field(const std::string& path);

/// Binary PGM (P5) of a 2D phase: set cells white, axis 0 along the rows.
void write_pgm(const PhaseField& phase, const std::string& path);

}  // namespace mbo

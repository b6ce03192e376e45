#include "mbo/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "mbo/contour.hpp"
#include "mbo/kernels.hpp"

namespace mbo {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid argument";
    case ErrorKind::GridMismatch: return "grid mismatch";
    case ErrorKind::Clearance: return "clearance";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::BoundaryTouch: return "boundary touch";
    case ErrorKind::Header: return "header";
    case ErrorKind::SizeMismatch: return "size mismatch";
    case ErrorKind::FocalCrossing: return "focal crossing";
    case ErrorKind::OpenContour: return "open contour";
    case ErrorKind::EmptySet: return "empty set";
    case ErrorKind::NotOnContour: return "not on contour";
    case ErrorKind::DegenerateFit: return "degenerate fit";
    case ErrorKind::Config: return "config";
    case ErrorKind::Io: return "io";
  }
  return "error";
}

double GridSpec::cell_volume() const { return std::pow(spacing(), dim); }

std::size_t GridSpec::size() const {
  std::size_t n = 1;
  for (int a = 0; a < dim; ++a) n *= static_cast<std::size_t>(cells);
  return n;
}

void GridSpec::validate() const {
  if (dim != 2 && dim != 3) throw Error(ErrorKind::InvalidArgument, "dim must be 2 or 3");
  if (cells < 16) throw Error(ErrorKind::InvalidArgument, "cells_per_axis must be >= 16");
  if (cells % 2 != 0) throw Error(ErrorKind::InvalidArgument, "cells_per_axis must be even");
  if (!(extent > 0.0) || !std::isfinite(extent))
    throw Error(ErrorKind::InvalidArgument, "extent must be positive");
  if (!periodic) throw Error(ErrorKind::InvalidArgument, "only periodic grids are supported");
}

std::array<int, 3> GridSpec::coords(std::size_t idx) const {
  if (dim == 2) return {static_cast<int>(idx / cells), static_cast<int>(idx % cells), 0};
  const std::size_t n = static_cast<std::size_t>(cells);
  return {static_cast<int>(idx / (n * n)), static_cast<int>((idx / n) % n),
          static_cast<int>(idx % n)};
}

Point GridSpec::center(std::size_t idx) const {
  const auto c = coords(idx);
  const double h = spacing();
  Point p{(c[0] + 0.5) * h, (c[1] + 0.5) * h, 0.0};
  if (dim == 3) p[2] = (c[2] + 0.5) * h;
  return p;
}

Point GridSpec::box_center() const {
  return {0.5 * extent, 0.5 * extent, dim == 3 ? 0.5 * extent : 0.0};
}

double ScalarField::min() const { return *std::min_element(values.begin(), values.end()); }
double ScalarField::max() const { return *std::max_element(values.begin(), values.end()); }
double ScalarField::mean() const {
  return kernels::parallel::sum(values) / static_cast<double>(values.size());
}
bool ScalarField::all_finite() const {
  return std::all_of(values.begin(), values.end(), [](double v) { return std::isfinite(v); });
}

std::size_t PhaseField::count() const {
  std::size_t n = 0;
  for (auto b : bits) n += b;
  return n;
}

void require_same_grid(const GridSpec& a, const GridSpec& b) {
  if (!(a == b)) throw Error(ErrorKind::GridMismatch, "fields live on different grids");
}

namespace {

template <class T>
std::vector<T> shifted(const GridSpec& g, const std::vector<T>& src, std::array<int, 3> off) {
  std::vector<T> out(src.size());
  const int n = g.cells;
  auto wrap = [n](int v) { return ((v % n) + n) % n; };
  for (std::size_t idx = 0; idx < src.size(); ++idx) {
    const auto c = g.coords(idx);
    out[g.index(wrap(c[0] + off[0]), wrap(c[1] + off[1]), g.dim == 3 ? wrap(c[2] + off[2]) : 0)] =
        src[idx];
  }
  return out;
}

}  // namespace

PhaseField shift_cells(const PhaseField& phase, std::array<int, 3> offset) {
  PhaseField out(phase.grid);
  out.bits = shifted(phase.grid, phase.bits, offset);
  return out;
}

ScalarField shift_cells(const ScalarField& field, std::array<int, 3> offset) {
  ScalarField out(field.grid);
  out.values = shifted(field.grid, field.values, offset);
  return out;
}

Point periodic_delta(const GridSpec& grid, const Point& a, const Point& b) {
  Point d{};
  for (int i = 0; i < grid.dim; ++i) {
    double v = b[i] - a[i];
    v -= grid.extent * std::round(v / grid.extent);
    d[i] = v;
  }
  return d;
}

ScalarField to_pm_one(const PhaseField& phase) {
  ScalarField out(phase.grid);
  kernels::parallel::pm_one(phase.bits, out.values);
  return out;
}

double symmetric_difference_volume(const PhaseField& a, const PhaseField& b) {
  require_same_grid(a.grid, b.grid);
  return static_cast<double>(kernels::parallel::count_differences(a.bits, b.bits)) *
         a.grid.cell_volume();
}

double perimeter(const PhaseField& phase) {
  const std::size_t n = phase.count();
  if (n == 0 || n == phase.bits.size()) return 0.0;
  ScalarField raw(phase.grid);
  for (std::size_t i = 0; i < raw.values.size(); ++i) raw.values[i] = phase.bits[i];
  ScalarField smooth(phase.grid);
  kernels::parallel::box_smooth(phase.grid, raw.values, smooth.values);
  return periodic_level_measure(smooth, 0.5);
}

double equivalent_radius(const PhaseField& phase) {
  const double v = phase.volume();
  if (phase.grid.dim == 2) return std::sqrt(v / std::numbers::pi);
  return std::cbrt(3.0 * v / (4.0 * std::numbers::pi));
}

double boundary_clearance(const PhaseField& phase) {
  const GridSpec& g = phase.grid;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t idx = 0; idx < phase.bits.size(); ++idx) {
    if (!phase.bits[idx]) continue;
    const Point p = g.center(idx);
    for (int a = 0; a < g.dim; ++a) best = std::min({best, p[a], g.extent - p[a]});
  }
  return best;
}

int component_count(const PhaseField& phase) {
  const GridSpec& g = phase.grid;
  std::vector<int> label(phase.bits.size(), -1);
  std::vector<std::size_t> stack;
  int components = 0;
  const int n = g.cells;
  auto wrap = [n](int v) { return (v + n) % n; };
  for (std::size_t seed = 0; seed < phase.bits.size(); ++seed) {
    if (!phase.bits[seed] || label[seed] >= 0) continue;
    label[seed] = components;
    stack.push_back(seed);
    while (!stack.empty()) {
      const std::size_t cur = stack.back();
      stack.pop_back();
      const auto c = g.coords(cur);
      for (int a = 0; a < g.dim; ++a) {
        for (int s : {-1, 1}) {
          auto nc = c;
          nc[a] = wrap(nc[a] + s);
          const std::size_t nb = g.index(nc[0], nc[1], nc[2]);
          if (phase.bits[nb] && label[nb] < 0) {
            label[nb] = components;
            stack.push_back(nb);
          }
        }
      }
    }
    ++components;
  }
  return components;
}

}  // namespace mbo

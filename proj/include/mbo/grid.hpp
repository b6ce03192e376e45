#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mbo/error.hpp"

namespace mbo {

/// Points always carry three coordinates; 2D code ignores the last one.
using Point = std::array<double, 3>;

/// Uniform periodic box [0, extent)^dim sampled at cell centers.
/// Axis 0 is the slowest-varying index of the row-major layout.
struct GridSpec {
  int dim = 2;
  int cells = 256;
  double extent = 1.0;
  bool periodic = true;

  double spacing() const { return extent / cells; }
  double cell_volume() const;
  std::size_t size() const;

  /// Throws Error(InvalidArgument) when an invariant is broken.
  void validate() const;

  std::size_t index(int i, int j, int k = 0) const {
    if (dim == 2) return static_cast<std::size_t>(i) * cells + j;
    return (static_cast<std::size_t>(i) * cells + j) * cells + k;
  }
  std::array<int, 3> coords(std::size_t idx) const;
  Point center(std::size_t idx) const;
  Point box_center() const;

  bool operator==(const GridSpec&) const = default;
};

struct ScalarField {
  GridSpec grid;
  std::vector<double> values;

  ScalarField() = default;
  explicit ScalarField(const GridSpec& g, double fill = 0.0)
      : grid(g), values(g.size(), fill) {}

  double min() const;
  double max() const;
  double mean() const;
  bool all_finite() const;
};

struct PhaseField {
  GridSpec grid;
  std::vector<std::uint8_t> bits;

  PhaseField() = default;
  explicit PhaseField(const GridSpec& g, std::uint8_t fill = 0)
      : grid(g), bits(g.size(), fill) {}

  std::size_t count() const;
  double volume() const { return static_cast<double>(count()) * grid.cell_volume(); }
  bool empty() const { return count() == 0; }
};

void require_same_grid(const GridSpec& a, const GridSpec& b);

/// Cyclic shift by whole cells along every axis.
PhaseField shift_cells(const PhaseField& phase, std::array<int, 3> offset);
ScalarField shift_cells(const ScalarField& field, std::array<int, 3> offset);

/// Minimum-image displacement b - a on the periodic box.
Point periodic_delta(const GridSpec& grid, const Point& a, const Point& b);

/// ±1 field 2χ − 1.
ScalarField to_pm_one(const PhaseField& phase);

/// Volume of the cells where the phases differ.
double symmetric_difference_volume(const PhaseField& a, const PhaseField& b);

/// Surface measure of ∂χ: the level-1/2 contour of the box-filtered
/// indicator, measured on the periodic lattice (works for sets that wrap).
double perimeter(const PhaseField& phase);

/// Volume-equivalent radius (√(V/π) in 2D, ∛(3V/4π) in 3D).
double equivalent_radius(const PhaseField& phase);

/// Smallest distance from a set cell center to the box boundary; +inf for
/// the empty phase.
double boundary_clearance(const PhaseField& phase);

/// Number of face-connected components of the set (periodic adjacency).
int component_count(const PhaseField& phase);

}  // namespace mbo

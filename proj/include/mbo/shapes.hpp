#pragma once

#include <string>
#include <variant>
#include <vector>

#include "mbo/grid.hpp"

namespace mbo {

struct Ball {
  Point center{};
  double radius = 0.0;
};

/// {x : x[axis] < offset}. Exempt from the clearance rule.
struct HalfSpace {
  int axis = 0;
  double offset = 0.5;
};

struct BallUnion {
  std::vector<Ball> balls;
};

/// Two balls joined by a cylindrical neck along the segment between centers.
struct Dumbbell {
  Point left{};
  Point right{};
  double radius = 0.0;
  double neck_radius = 0.0;
};

/// Axis-aligned ellipse/ellipsoid with the given semi-axes.
struct Ellipsoid {
  Point center{};
  Point semi_axes{};
};

/// Axis-aligned box with the given half-widths.
struct Cuboid {
  Point center{};
  Point half_widths{};
};

using Shape = std::variant<Ball, HalfSpace, BallUnion, Dumbbell, Ellipsoid, Cuboid>;

bool contains(const Shape& shape, const Point& x, int dim);

/// Largest Weingarten norm of the shape's boundary, where it is finite
/// (ball, ellipse/ellipsoid); 0 for a half-space.
double max_weingarten_norm(const Shape& shape, int dim);

/// Minimum distance of the shape's bounding box to the box boundary.
double shape_clearance(const Shape& shape, const GridSpec& grid);

/// Cell-center membership of the shape. Rejects shapes closer than 10 % of
/// the extent to the box boundary (half-spaces excepted).
PhaseField indicator_from_shape(const Shape& shape, const GridSpec& grid);

std::string shape_name(const Shape& shape);

}  // namespace mbo

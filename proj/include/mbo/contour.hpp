#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "mbo/grid.hpp"

namespace mbo {

/// Closed oriented level-set mesh. In 2D the vertices of each loop are
/// stored contiguously and `segments` walk each loop counter-clockwise
/// around the enclosed set; in 3D triangles are wound so their right-hand
/// normal points out of the enclosed set. The enclosed set is always on the
/// inward-normal side.
struct Contour {
  int dim = 2;
  std::vector<Point> vertices;
  std::vector<std::array<int, 2>> segments;
  std::vector<std::array<int, 3>> triangles;
  /// Connected-component id per vertex.
  std::vector<int> loop_id;

  /// Optional slots filled by the geometry module.
  std::vector<Point> normals;
  std::vector<double> mean_curvature;

  bool empty() const { return vertices.empty(); }
  int loop_count() const;
  std::size_t element_count() const { return dim == 2 ? segments.size() : triangles.size(); }

  /// Total length (2D) or area (3D).
  double measure() const;
};

/// Marching squares (2D) / marching tetrahedra on the Kuhn split (3D) over
/// the non-periodic lattice of cell centers. A cell is inside when its value
/// exceeds `level`. Returns an empty contour when no cell is inside; throws
/// Precondition when `level` lies outside [min, max] and BoundaryTouch when
/// the inside set reaches the outermost ring of cells.
Contour extract_contour(const ScalarField& field, double level);

/// Length/area of the level set measured on the periodic lattice, without
/// building loops (sets may wrap around the box).
double periodic_level_measure(const ScalarField& field, double level);

/// Outward unit normals from the oriented elements.
std::vector<Point> element_vertex_normals(const Contour& contour);

/// Analytic polygon of a circle/ellipse (2D), counter-clockwise, for tests
/// and oracles.
Contour make_ellipse_contour(const Point& center, double a, double b, int vertices);
Contour make_polygon_contour(const std::vector<Point>& points);

/// CSV with header `x,y[,z],loop_id`.
void write_contour_csv(const Contour& contour, std::ostream& out);
void write_contour_csv(const Contour& contour, const std::string& path);

}  // namespace mbo

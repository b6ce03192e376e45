#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "mbo/contour.hpp"
#include "mbo/grid.hpp"

namespace mbo::geometry {

/// Principal curvatures at a surface point, with |A| = √(Σκᵢ²) and H = Σκᵢ.
struct CurvatureSample {
  std::vector<double> kappas;
  double weingarten_norm = 0.0;
  double mean_sum = 0.0;
};
CurvatureSample make_sample(std::vector<double> kappas);

/// r > 0 inside. Within the band `nearest` holds the closest contour point
/// and `element` the index of its segment/triangle; elsewhere r = ±band and
/// element = -1.
struct SignedDistanceField {
  ScalarField r;
  std::vector<Point> nearest;
  std::vector<int> element;
  double band = 0.0;
};

/// Exact distance to the contour elements within `band`, sign from the
/// angle-weighted pseudo-normals. Candidate elements come from a bucket grid
/// of cell size `band`; `signed_distance_brute_force` scans every element.
/// Cells farther than `band` take the sign of their region, propagated from
/// the band by flood fill. Throws OpenContour for a contour with boundary and
/// InvalidArgument when band < 2 spacings.
SignedDistanceField signed_distance(const Contour& contour, const GridSpec& grid, double band);
SignedDistanceField signed_distance_brute_force(const Contour& contour, const GridSpec& grid,
                                                double band);

/// Distance from p to the closest point of the contour (brute force).
double distance_to_contour(const Contour& contour, const Point& p, Point* closest = nullptr);

/// Points spaced at most `spacing` apart along every element.
std::vector<Point> resample(const Contour& contour, double spacing);

/// Max of the two directed sup-inf distances between point sets.
double hausdorff(std::span<const Point> a, std::span<const Point> b);
/// Resamples both contours at `spacing` and measures each sample set
/// against the other contour's elements.
double hausdorff(const Contour& a, const Contour& b, double spacing);

struct FieldCurvature {
  ScalarField value;
  /// 1 where |∇u| fell below the threshold; value is 0 there.
  std::vector<std::uint8_t> masked;
};

/// −div(∇u/|∇u|) by centered differences, so a field that is positive inside
/// a circle of radius R gives +1/R on it.
FieldCurvature curvature_from_field(const ScalarField& u, double min_gradient = 1e-8);

/// ‖P ∇²u P‖_F / |∇u| with P the tangential projector: the Weingarten norm
/// of the level sets.
FieldCurvature weingarten_norm_from_field(const ScalarField& u, double min_gradient = 1e-8);

/// Periodic multilinear interpolation of a cell-centered field.
double interpolate(const ScalarField& field, const Point& x);
std::vector<double> sample_at_vertices(const ScalarField& field, const Contour& contour);

struct ArcFit {
  std::vector<double> kappa;
  std::vector<Point> normals;
};

/// Least-squares parabola through the vertices within arc length window/2 of
/// each vertex (2D). Curvature is positive where the curve bends toward the
/// enclosed set; normals point outward.
ArcFit arc_fit(const Contour& contour, double window);

/// Weingarten map of the graph of f over ℝⁿ:
/// (I − ∇f⊗∇f/(1+|∇f|²)) ∇²f / √(1+|∇f|²).
Eigen::MatrixXd weingarten_graph(const Eigen::VectorXd& grad, const Eigen::MatrixXd& hess);
/// div(∇f/√(1+|∇f|²)), which equals trace(weingarten_graph).
double mean_curvature_graph(const Eigen::VectorXd& grad, const Eigen::MatrixXd& hess);

/// κᵢ ↦ κᵢ/(1 − r₀κᵢ): curvatures of the parallel surface at signed offset
/// r₀ (r₀ > 0 inward). Throws FocalCrossing when some |r₀κᵢ| ≥ 1.
CurvatureSample offset_curvatures(std::span<const double> kappas, double r0);

/// ψ = Σκᵢ²/(1 − rκᵢ). Throws FocalCrossing when some |rκᵢ| ≥ 1.
double psi(double r, std::span<const double> kappas);

/// Shortest path along the contour edges between two points lying on it.
/// Throws NotOnContour when a point is farther than `tolerance` from every
/// element. Points on different components are +inf apart.
double intrinsic_distance(const Contour& contour, const Point& p, const Point& q,
                          double tolerance = 1e-9);

struct BallRadius {
  /// Largest r for which the tangent balls of radius r at every vertex
  /// contain no other vertex farther than `min_chord` away.
  double radius = 0.0;
  double interior = 0.0;
  double exterior = 0.0;
  /// min |p − q| over pairs with intrinsic distance ≥ r★ = c_star / c0.
  double m = 0.0;
  double r_star = 0.0;
  bool self_intersecting = false;
};

/// Tangent-ball radius of a closed embedded contour. For the vertex p with
/// outward normal n, the interior ball of radius r is empty of q iff
/// r ≤ |q−p|²/(2|n·(q−p)|) whenever n·(q−p) < 0 (exterior: n·(q−p) > 0).
/// Vertices closer than `min_chord` (default: 3 median edge lengths) are
/// skipped so the estimate is not dominated by vertex noise. `c0` is the
/// curvature bound; 0 means 1/radius. Uses contour.normals when filled.
BallRadius ball_radius(const Contour& contour, double c_star = 1.0, double c0 = 0.0,
                       double min_chord = 0.0);

/// True when two non-adjacent elements intersect (2D segments only).
bool self_intersects(const Contour& contour);

}  // namespace mbo::geometry

#pragma once

#include <span>
#include <vector>

#include "mbo/grid.hpp"

namespace mbo::ansatz {

/// erf(r / 2√t).
double u0_profile(double r, double t);
/// ∂r of u0_profile: exp(−r²/4t)/√(πt).
double u0_r(double r, double t);
/// (∂t − Δ)U⁰ near a surface moving by mean curvature:
/// ψ(r, κ) · r · exp(−r²/4t)/√(πt).
double heat_residual(double r, double t, std::span<const double> kappas);

/// Oracle-backed evolving surface for one-step studies: a circle/sphere
/// shrinking by R(t) = √(R0² − 2nt), or a stationary flat interface
/// {x[axis] < offset}.
struct AnsatzContext {
  GridSpec grid;
  bool flat = false;
  Point center{};
  double R0 = 0.3;
  int axis = 0;
  double offset = 0.5;
  /// Width of the band around the interface; 0 means 6√h.
  double band = 0.0;
  /// Starting node count for the τ-quadrature, doubled until successive
  /// results differ by less than `tolerance` in sup norm.
  int nodes = 16;
  int max_nodes = 1024;
  double tolerance = 1e-8;

  int surface_dim() const { return grid.dim - 1; }
  double radius(double t) const;
  /// Signed distance to the surface at time t, positive inside.
  double distance(const Point& x, double t) const;
  /// κ for the circle/sphere at time t (empty when flat).
  std::vector<double> kappas(double t) const;
  double band_width(double h) const;
};

ScalarField u0_field(const AnsatzContext& ctx, double t);
ScalarField residual_field(const AnsatzContext& ctx, double t);

struct U1Result {
  ScalarField field;
  int nodes = 0;
  /// Sup-norm change at the last node doubling.
  double change = 0.0;
};

/// U¹(·,h) = −∫₀ʰ e^{(h−τ)Δ} (∂t − Δ)U⁰(·,τ) dτ, with τ = σ² and
/// Gauss–Legendre nodes in σ. Throws Precondition when the surface comes
/// closer than the band to the box boundary.
U1Result u1_field(const AnsatzContext& ctx, double h);

/// 1 on cells within band_width(h) of the surface at time h.
std::vector<std::uint8_t> band_mask(const AnsatzContext& ctx, double h);

/// diffuse(2χ − 1, h) for the exact disk/ball (not its pixelation), from its
/// analytic Fourier coefficients.
ScalarField exact_heat_solution(const AnsatzContext& ctx, double h);

/// 2√π e^{−d0²/4h} d0 t / h^{3/2}; requires 0 < t < h.
double gaussian_integral_1(double d0, double t, double h);
/// 2√π e^{−d0²/4h} (d0² t / h^{5/2} − 2t / h^{3/2}); requires 0 < t < h.
double gaussian_integral_2(double d0, double t, double h);

/// Gauss–Legendre nodes and weights on [−1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace mbo::ansatz

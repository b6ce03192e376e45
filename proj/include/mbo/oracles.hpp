#pragma once

#include <cstdint>
#include <optional>

namespace mbo::oracles {

/// √(R0² − 2nt): a radius-R0 sphere of surface dimension n moving with
/// normal speed Σκᵢ. Throws InvalidArgument at or past extinction.
double exact_sphere_radius(double R0, int n, double t);

/// Fraction of the heat started as the indicator of the ball B_R that sits
/// at distance rho from the center after time h, i.e. (e^{hΔ} 1_{B_R})(ρ).
/// 2D: adaptive quadrature of the Bessel-kernel integral; 3D: erf closed form.
double ball_heat_mass(double R, double rho, double h, int dim);

struct RadialStep {
  double radius = 0.0;
  bool extinct = false;
};

/// One grid-free MBO step from the ball of radius R0: the root ρ★ of
/// 2·ball_heat_mass(R0, ρ, h) − 1, bracketed and bisected to 1e-13.
RadialStep radial_mbo_step_oracle(double R0, double h, int dim);

/// Φ(x) = ∫₁ˣ ds/(s + Ds³) = ln x − ½ ln((1 + Dx²)/(1 + D)).
double gronwall_phi(double x, double D);
/// Inverse of Φ by bisection; +inf when y is at or above sup Φ = ½ ln((1+D)/D).
double gronwall_phi_inv(double y, double D);

/// Adaptive quadrature of the two appendix Gaussian integrals over r′ ∈ ℝ:
/// (h−t)^{−1/2} ∫ [1 or (d0−r′)/(h−t)] e^{−(d0−r′)²/4(h−t)} (r′/√t) e^{−r′²/4t} dr′.
/// `l1` receives the integral of the integrand's absolute value.
double gaussian_integral_1_quadrature(double d0, double t, double h, double* l1 = nullptr);
double gaussian_integral_2_quadrature(double d0, double t, double h, double* l1 = nullptr);

/// ‖∇G(·,t)‖₁ by radial quadrature of |∂ρG|·|S^{d−1}|ρ^{d−1}, and ‖G(·,t)‖₁.
double heat_kernel_gradient_l1_quadrature(double t, int dim);
double heat_kernel_l1_quadrature(double t, int dim);

}  // namespace mbo::oracles

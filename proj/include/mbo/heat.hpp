#pragma once

#include <complex>
#include <functional>
#include <utility>

#include "mbo/grid.hpp"

namespace mbo::heat {

struct HeatKernelParams {
  int dim = 2;
  double t = 0.0;
};

/// G(x,t) = exp(−|x|²/4t) / (4πt)^{dim/2}.
double heat_kernel(const Point& x, const HeatKernelParams& params);

/// t must be positive and at most extent²/16 (images outside the box then
/// carry < 1e-12 of the kernel mass).
void check_diffusion_time(const GridSpec& grid, double t);

/// Exact heat semigroup on the periodic grid: FFT, multiply mode k by
/// exp(−|2πk/extent|² t), inverse FFT.
ScalarField diffuse(const ScalarField& field, double t);

/// Angular wavevector of a mode, used by `synthesize`.
using Wavevector = std::array<double, 3>;
using SpectrumFn = std::function<std::complex<double>(const Wavevector&)>;

/// Samples at the cell centers the periodic function whose continuous
/// Fourier coefficients are `coefficient(k)` (∫_box f e^{−ik·x} dx), after
/// diffusing it for time t ≥ 0. With analytic coefficients this is the heat
/// solution free of sampling error.
ScalarField synthesize(const GridSpec& grid, const SpectrumFn& coefficient, double t);

/// (‖G(·,t)‖₁, ‖∇G(·,t)‖₁); the second is Γ((d+1)/2) / (Γ(d/2) √t).
std::pair<double, double> kernel_l1_norms(double t, int dim);

}  // namespace mbo::heat

#include "mbo/ansatz.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "mbo/geometry.hpp"
#include "mbo/heat.hpp"

namespace mbo::ansatz {

using std::numbers::pi;

double u0_profile(double r, double t) { return std::erf(r / (2.0 * std::sqrt(t))); }

double u0_r(double r, double t) { return std::exp(-r * r / (4.0 * t)) / std::sqrt(pi * t); }

double heat_residual(double r, double t, std::span<const double> kappas) {
  const double g = u0_r(r, t);
  if (g == 0.0 || r == 0.0) return 0.0;
  return geometry::psi(r, kappas) * r * g;
}

double AnsatzContext::radius(double t) const {
  const double r2 = R0 * R0 - 2.0 * surface_dim() * t;
  if (r2 <= 0.0) throw Error(ErrorKind::InvalidArgument, "time past extinction");
  return std::sqrt(r2);
}

double AnsatzContext::distance(const Point& x, double t) const {
  if (flat) return offset - x[axis];
  double d2 = 0.0;
  for (int a = 0; a < grid.dim; ++a) d2 += (x[a] - center[a]) * (x[a] - center[a]);
  return radius(t) - std::sqrt(d2);
}

std::vector<double> AnsatzContext::kappas(double t) const {
  if (flat) return {};
  return std::vector<double>(surface_dim(), 1.0 / radius(t));
}

double AnsatzContext::band_width(double h) const { return band > 0.0 ? band : 6.0 * std::sqrt(h); }

ScalarField u0_field(const AnsatzContext& ctx, double t) {
  ScalarField out(ctx.grid);
  const auto total = static_cast<std::ptrdiff_t>(ctx.grid.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < total; ++i)
    out.values[i] = u0_profile(ctx.distance(ctx.grid.center(i), t), t);
  return out;
}

// Over the whole grid the offset only has to stay on the near side of the
// focal point (1 − rκ > 0); far outside points have rκ < −1 and are fine.
// The focal point itself (the center) is an integrable singularity; a cell
// center sitting on it is kept half a cell away.
ScalarField residual_field(const AnsatzContext& ctx, double t) {
  ScalarField out(ctx.grid);
  if (ctx.flat) return out;
  const auto k = ctx.kappas(t);
  const double near = 0.5 * ctx.grid.spacing();
  const auto total = static_cast<std::ptrdiff_t>(ctx.grid.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < total; ++i) {
    const double r = ctx.distance(ctx.grid.center(i), t);
    double p = 0.0;
    for (double kappa : k) p += kappa * kappa / std::max(1.0 - r * kappa, near * kappa);
    out.values[i] = p * r * u0_r(r, t);
  }
  return out;
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      const double p = std::legendre(n, x);
      dp = n * (x * p - std::legendre(n - 1, x)) / (x * x - 1.0);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    dp = n * (x * std::legendre(n, x) - std::legendre(n - 1, x)) / (x * x - 1.0);
    nodes[i] = x;
    weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

namespace {

void check_band(const AnsatzContext& ctx, double h) {
  if (ctx.band > 0.0 && ctx.band < 6.0 * std::sqrt(h))
    throw Error(ErrorKind::Precondition, "band narrower than 6 sqrt(h)");
  if (ctx.flat) return;
  const double reach = ctx.R0 + ctx.band_width(h);
  for (int a = 0; a < ctx.grid.dim; ++a)
    if (ctx.center[a] - reach < 0.0 || ctx.center[a] + reach > ctx.grid.extent)
      throw Error(ErrorKind::Precondition, "band reaches the box boundary");
}

ScalarField u1_with_nodes(const AnsatzContext& ctx, double h, int n) {
  std::vector<double> x, w;
  gauss_legendre(n, x, w);
  const double top = std::sqrt(h);
  ScalarField acc(ctx.grid);
  for (int i = 0; i < n; ++i) {
    const double sigma = 0.5 * top * (x[i] + 1.0);
    const double tau = sigma * sigma;
    const double weight = 0.5 * top * w[i] * 2.0 * sigma;
    const ScalarField f = heat::diffuse(residual_field(ctx, tau), h - tau);
    for (std::size_t c = 0; c < acc.values.size(); ++c) acc.values[c] -= weight * f.values[c];
  }
  return acc;
}

}  // namespace

U1Result u1_field(const AnsatzContext& ctx, double h) {
  if (!(h > 0.0)) throw Error(ErrorKind::InvalidArgument, "h must be positive");
  check_band(ctx, h);
  U1Result res;
  if (ctx.flat) {
    res.field = ScalarField(ctx.grid);
    return res;
  }
  int n = ctx.nodes;
  ScalarField prev = u1_with_nodes(ctx, h, n);
  for (;;) {
    const int next_n = 2 * n;
    ScalarField next = u1_with_nodes(ctx, h, next_n);
    double change = 0.0;
    for (std::size_t c = 0; c < next.values.size(); ++c)
      change = std::max(change, std::abs(next.values[c] - prev.values[c]));
    res.field = std::move(next);
    res.nodes = next_n;
    res.change = change;
    if (change < ctx.tolerance || next_n >= ctx.max_nodes) break;
    prev = res.field;
    n = next_n;
  }
  return res;
}

std::vector<std::uint8_t> band_mask(const AnsatzContext& ctx, double h) {
  std::vector<std::uint8_t> mask(ctx.grid.size());
  const double w = ctx.band_width(h);
  for (std::size_t i = 0; i < mask.size(); ++i)
    mask[i] = std::abs(ctx.distance(ctx.grid.center(i), h)) <= w ? 1 : 0;
  return mask;
}

ScalarField exact_heat_solution(const AnsatzContext& ctx, double h) {
  if (ctx.flat) throw Error(ErrorKind::InvalidArgument, "exact solution needs a disk or ball");
  const int dim = ctx.grid.dim;
  const double R = ctx.R0;
  const double box = std::pow(ctx.grid.extent, dim);
  auto coefficient = [&](const heat::Wavevector& k) {
    double kk = 0.0, phase = 0.0;
    for (int a = 0; a < dim; ++a) {
      kk += k[a] * k[a];
      phase += k[a] * ctx.center[a];
    }
    const double kn = std::sqrt(kk);
    const double kr = kn * R;
    double c;
    if (dim == 2) {
      c = kr < 1e-6 ? pi * R * R * (1.0 - kr * kr / 8.0) : 2.0 * pi * R * std::cyl_bessel_j(1.0, kr) / kn;
    } else {
      c = kr < 1e-4 ? 4.0 / 3.0 * pi * R * R * R * (1.0 - kr * kr / 10.0)
                    : 4.0 * pi * (std::sin(kr) - kr * std::cos(kr)) / (kn * kn * kn);
    }
    std::complex<double> value = 2.0 * c * std::polar(1.0, -phase);
    if (kk == 0.0) value -= box;
    return value;
  };
  return heat::synthesize(ctx.grid, coefficient, h);
}

namespace {

void check_times(double t, double h) {
  if (!(t > 0.0 && t < h)) throw Error(ErrorKind::InvalidArgument, "need 0 < t < h");
}

}  // namespace

double gaussian_integral_1(double d0, double t, double h) {
  check_times(t, h);
  return 2.0 * std::sqrt(pi) * std::exp(-d0 * d0 / (4.0 * h)) * d0 * t / std::pow(h, 1.5);
}

double gaussian_integral_2(double d0, double t, double h) {
  check_times(t, h);
  return 2.0 * std::sqrt(pi) * std::exp(-d0 * d0 / (4.0 * h)) *
         (d0 * d0 * t / std::pow(h, 2.5) - 2.0 * t / std::pow(h, 1.5));
}

}  // namespace mbo::ansatz

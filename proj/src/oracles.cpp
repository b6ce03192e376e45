#include "mbo/oracles.hpp"

#include <cmath>
#include <limits>
#include <algorithm>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/tools/roots.hpp>

#include "mbo/error.hpp"

namespace mbo::oracles {

using std::numbers::pi;
using Quad = boost::math::quadrature::gauss_kronrod<double, 61>;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double integrate(auto&& f, double a, double b) {
  return Quad::integrate(f, a, b, 10, 1e-14);
}

// I0(z) e^{−z}; above z = 50 the asymptotic series is accurate to rounding
// within 30 terms.
double bessel_i0_scaled(double z) {
  if (z < 50.0) return boost::math::cyl_bessel_i(0, z) * std::exp(-z);
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 30; ++k) {
    term *= (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * z);
    sum += term;
  }
  return sum / std::sqrt(2.0 * pi * z);
}

double bisect_root(auto&& f, double lo, double hi, double tol) {
  auto stop = [tol](double a, double b) { return std::abs(b - a) <= tol; };
  const auto [a, b] = boost::math::tools::bisect(f, lo, hi, stop);
  return 0.5 * (a + b);
}

}  // namespace

double exact_sphere_radius(double R0, int n, double t) {
  const double r2 = R0 * R0 - 2.0 * n * t;
  if (!(r2 > 0.0)) throw Error(ErrorKind::InvalidArgument, "time at or past extinction");
  return std::sqrt(r2);
}

double ball_heat_mass(double R, double rho, double h, int dim) {
  if (!(h > 0.0) || !(R > 0.0) || rho < 0.0)
    throw Error(ErrorKind::InvalidArgument, "ball_heat_mass needs R, h > 0 and rho >= 0");
  const double sh = std::sqrt(h);
  if (dim == 3) {
    const double a = (R - rho) / (2.0 * sh), b = (R + rho) / (2.0 * sh);
    if (rho < 1e-8 * R) {
      // ρ → 0 limit of the expression below.
      return std::erf(R / (2.0 * sh)) - R / std::sqrt(pi * h) * std::exp(-R * R / (4.0 * h));
    }
    return 0.5 * (std::erf(a) + std::erf(b)) -
           std::sqrt(h / pi) / rho * (std::exp(-a * a) - std::exp(-b * b));
  }
  if (dim != 2) throw Error(ErrorKind::InvalidArgument, "dim must be 2 or 3");
  auto f = [&](double s) {
    return s / (2.0 * h) * std::exp(-(s - rho) * (s - rho) / (4.0 * h)) *
           bessel_i0_scaled(s * rho / (2.0 * h));
  };
  const double lo = std::max(0.0, rho - 40.0 * sh), hi = std::min(R, rho + 40.0 * sh);
  if (lo >= hi) return rho > R ? 0.0 : 1.0;
  if (rho > lo && rho < hi) return integrate(f, lo, rho) + integrate(f, rho, hi);
  return integrate(f, lo, hi);
}

RadialStep radial_mbo_step_oracle(double R0, double h, int dim) {
  if (!(h > 0.0) || !(h < R0 * R0))
    throw Error(ErrorKind::InvalidArgument, "radial oracle needs 0 < h < R0^2");
  auto u = [&](double rho) { return 2.0 * ball_heat_mass(R0, rho, h, dim) - 1.0; };
  if (u(0.0) < 0.0) return {0.0, true};
  const double hi = R0 + 20.0 * std::sqrt(h);
  return {bisect_root(u, 0.0, hi, 1e-13), false};
}

double gronwall_phi(double x, double D) {
  if (!(x > 0.0)) throw Error(ErrorKind::InvalidArgument, "gronwall_phi needs x > 0");
  return std::log(x) - 0.5 * std::log((1.0 + D * x * x) / (1.0 + D));
}

double gronwall_phi_inv(double y, double D) {
  if (D > 0.0 && y >= 0.5 * std::log((1.0 + D) / D)) return kInf;
  auto f = [&](double x) { return gronwall_phi(x, D) - y; };
  double lo = 1.0, hi = 1.0;
  while (f(lo) > 0.0) lo *= 0.5;
  while (f(hi) < 0.0) hi *= 2.0;
  auto stop = [](double a, double b) { return std::abs(b - a) <= 1e-15 * std::abs(b); };
  const auto [a, b] = boost::math::tools::bisect(f, lo, hi, stop);
  return 0.5 * (a + b);
}

namespace {

// Both integrands are Gaussian in r′ centred near d0·t/h with variance
// 2t(h−t)/h; integrate over ±40 standard deviations.
template <class Weight>
double gaussian_quadrature(double d0, double t, double h, Weight&& weight, double* l1) {
  if (!(t > 0.0 && t < h)) throw Error(ErrorKind::InvalidArgument, "need 0 < t < h");
  const double s = h - t;
  auto f = [&](double r) {
    return weight(d0 - r, s) * std::exp(-(d0 - r) * (d0 - r) / (4.0 * s)) * r / std::sqrt(t) *
           std::exp(-r * r / (4.0 * t)) / std::sqrt(s);
  };
  const double mid = d0 * t / h, spread = std::sqrt(2.0 * t * s / h);
  const double a = mid - 40.0 * spread - 40.0 * std::sqrt(t), b = mid + 40.0 * spread + 40.0 * std::sqrt(t);
  // Split at the zeros of the integrand so the |f| integral is smooth per piece.
  std::vector<double> cuts{a, b};
  if (a < 0.0 && 0.0 < b) cuts.push_back(0.0);
  if (a < d0 && d0 < b) cuts.push_back(d0);
  cuts.push_back(mid);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double total = 0.0, abs_total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double piece = integrate(f, cuts[i], cuts[i + 1]);
    total += piece;
    abs_total += integrate([&](double r) { return std::abs(f(r)); }, cuts[i], cuts[i + 1]);
  }
  if (l1) *l1 = abs_total;
  return total;
}

}  // namespace

double gaussian_integral_1_quadrature(double d0, double t, double h, double* l1) {
  return gaussian_quadrature(d0, t, h, [](double, double) { return 1.0; }, l1);
}

double gaussian_integral_2_quadrature(double d0, double t, double h, double* l1) {
  return gaussian_quadrature(d0, t, h, [](double x, double s) { return x / s; }, l1);
}

namespace {

double sphere_area(int dim) { return 2.0 * std::pow(pi, 0.5 * dim) / std::tgamma(0.5 * dim); }

}  // namespace

double heat_kernel_gradient_l1_quadrature(double t, int dim) {
  auto f = [&](double rho) {
    const double g = std::exp(-rho * rho / (4.0 * t)) / std::pow(4.0 * pi * t, 0.5 * dim);
    return rho / (2.0 * t) * g * sphere_area(dim) * std::pow(rho, dim - 1);
  };
  return integrate(f, 0.0, 60.0 * std::sqrt(t));
}

double heat_kernel_l1_quadrature(double t, int dim) {
  auto f = [&](double rho) {
    return std::exp(-rho * rho / (4.0 * t)) / std::pow(4.0 * pi * t, 0.5 * dim) *
           sphere_area(dim) * std::pow(rho, dim - 1);
  };
  return integrate(f, 0.0, 60.0 * std::sqrt(t));
}

}  // namespace mbo::oracles

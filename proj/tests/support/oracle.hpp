#pragma once

// Reference computations for the tests. Everything here is written from the
// defining formulas with plain loops so it shares no code path with the
// library it checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "mbo/grid.hpp"

namespace oracle {

inline constexpr double pi = std::numbers::pi;

// Adaptive Simpson with Richardson correction.
inline double simpson_step(const std::function<double(double)>& f, double a, double b, double fa,
                           double fm, double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b), lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-13, int depth = 48) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_step(f, a, b, fa, fm, fb, whole, tol, depth);
}

// Splits [a, b] into n equal panels before the adaptive pass, so narrow
// peaks are not missed by the first coarse samples.
inline double integrate_panels(const std::function<double(double)>& f, double a, double b, int n,
                               double tol = 1e-14) {
  double s = 0.0;
  const double w = (b - a) / n;
  for (int i = 0; i < n; ++i) s += integrate(f, a + i * w, a + (i + 1) * w, tol / n);
  return s;
}

// Maclaurin series of erf; fine for |x| ≤ 3.
inline double erf_series(double x) {
  double term = x, sum = x;
  for (int n = 1; n < 200; ++n) {
    term *= -x * x / n;
    const double add = term / (2 * n + 1);
    sum += add;
    if (std::abs(add) < 1e-18 * std::abs(sum)) break;
  }
  return 2.0 / std::sqrt(pi) * sum;
}

inline double distance(const mbo::Point& a, const mbo::Point& b, int dim = 2) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

inline double point_segment(const mbo::Point& p, const mbo::Point& a, const mbo::Point& b) {
  const double dx = b[0] - a[0], dy = b[1] - a[1];
  const double len2 = dx * dx + dy * dy;
  double s = len2 > 0.0 ? ((p[0] - a[0]) * dx + (p[1] - a[1]) * dy) / len2 : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  return std::hypot(p[0] - a[0] - s * dx, p[1] - a[1] - s * dy);
}

// Cells whose center lies strictly inside the disk, counted by brute force.
inline std::size_t cells_in_disk(int cells, double extent, double cx, double cy, double R) {
  const double dx = extent / cells;
  std::size_t n = 0;
  for (int i = 0; i < cells; ++i)
    for (int j = 0; j < cells; ++j) {
      const double x = (i + 0.5) * dx - cx, y = (j + 0.5) * dx - cy;
      if (x * x + y * y < R * R) ++n;
    }
  return n;
}

// Heat at distance rho from the center of the disk of radius R after time h:
// direct 2D integral of the Gaussian over the disk in polar coordinates
// about the evaluation point.
inline double disk_heat_mass(double R, double rho, double h) {
  // the ray from the query point at angle θ meets the circle at s± with
  // s² − 2sρcosθ + ρ² − R² = 0; the radial Gaussian integral over [s−, s+]
  // is closed form
  auto ray = [&](double theta) {
    const double c = rho * std::cos(theta);
    const double disc = c * c - (rho * rho - R * R);
    if (disc <= 0.0) return 0.0;
    const double sq = std::sqrt(disc);
    double lo = c - sq, hi = c + sq;
    if (hi <= 0.0) return 0.0;
    lo = std::max(lo, 0.0);
    // ∫ s e^{−s²/4h} ds / (4πh) = (e^{−lo²/4h} − e^{−hi²/4h}) / (2π)
    return (std::exp(-lo * lo / (4 * h)) - std::exp(-hi * hi / (4 * h))) / (2 * pi);
  };
  return integrate_panels(ray, 0.0, 2 * pi, 64, 1e-14);
}

// Same for the 3D ball, integrating over the polar angle only.
inline double ball_heat_mass_3d(double R, double rho, double h) {
  auto ray = [&](double theta) {
    const double c = rho * std::cos(theta);
    const double disc = c * c - (rho * rho - R * R);
    if (disc <= 0.0) return 0.0;
    const double sq = std::sqrt(disc);
    double lo = std::max(c - sq, 0.0), hi = c + sq;
    if (hi <= 0.0) return 0.0;
    // ∫ s² e^{−s²/4h} ds / (4πh)^{3/2}, times the azimuthal 2π and sinθ
    auto prim = [&](double s) {
      return -2.0 * h * s * std::exp(-s * s / (4 * h)) +
             2.0 * h * std::sqrt(pi * h) * std::erf(s / (2 * std::sqrt(h)));
    };
    return 2 * pi * std::sin(theta) * (prim(hi) - prim(lo)) / std::pow(4 * pi * h, 1.5);
  };
  return integrate_panels(ray, 0.0, pi, 64, 1e-14);
}

// Root of f on [a, b] by plain bisection.
inline double bisect(const std::function<double(double)>& f, double a, double b, double tol) {
  double fa = f(a);
  while (b - a > tol) {
    const double m = 0.5 * (a + b), fm = f(m);
    if ((fm > 0) == (fa > 0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

// Minimum radius of curvature of the ellipse (a cos s, b sin s) by dense
// sampling of the parametric curvature formula.
inline double ellipse_min_radius(double a, double b, int samples = 200000) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const double s = 2 * pi * i / samples;
    const double xp = -a * std::sin(s), yp = b * std::cos(s);
    const double xpp = -a * std::cos(s), ypp = -b * std::sin(s);
    const double k = std::abs(xp * ypp - yp * xpp) / std::pow(xp * xp + yp * yp, 1.5);
    best = std::min(best, 1.0 / k);
  }
  return best;
}

// Shortest walk between two polygon vertices, enumerating every simple path
// in the cycle graph (there are exactly two).
inline double polygon_path(const std::vector<mbo::Point>& v, int p, int q) {
  const int n = static_cast<int>(v.size());
  double best = std::numeric_limits<double>::infinity();
  for (int dir : {1, -1}) {
    double len = 0.0;
    int i = p;
    while (i != q) {
      const int j = ((i + dir) % n + n) % n;
      len += distance(v[i], v[j]);
      i = j;
    }
    best = std::min(best, len);
  }
  return best;
}

// Directed sup-inf by brute force over point sets.
inline double hausdorff_points(const std::vector<mbo::Point>& a, const std::vector<mbo::Point>& b) {
  auto directed = [](const auto& x, const auto& y) {
    double worst = 0.0;
    for (const auto& p : x) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& q : y) best = std::min(best, distance(p, q));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

inline std::vector<mbo::Point> circle_points(double cx, double cy, double R, int n) {
  std::vector<mbo::Point> out(n);
  for (int i = 0; i < n; ++i) {
    const double s = 2 * pi * i / n;
    out[i] = {cx + R * std::cos(s), cy + R * std::sin(s), 0.0};
  }
  return out;
}

// Ordinary least squares slope of log y against log x.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const int n = static_cast<int>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// The two appendix integrals over r' in R, written out:
// (h-t)^{-1/2} ∫ w e^{-(d0-r')²/4(h-t)} (r'/√t) e^{-r'²/4t} dr',
// w = 1 for the first and (d0-r')/(h-t) for the second. With `absolute` the
// integrand's modulus is integrated instead.
inline double gaussian_appendix_integral(int which, double d0, double t, double h, bool absolute = false) {
  const double s = h - t;
  auto f = [&](double r) {
    const double w = which == 1 ? 1.0 : (d0 - r) / s;
    const double v = w * std::exp(-(d0 - r) * (d0 - r) / (4 * s)) * r / std::sqrt(t) *
                     std::exp(-r * r / (4 * t)) / std::sqrt(s);
    return absolute ? std::abs(v) : v;
  };
  const double reach = 30 * std::sqrt(h);
  const double a = -reach + std::min(d0, 0.0), b = reach + std::max(d0, 0.0);
  // tolerance relative to the size of |f|, from a coarse midpoint pass
  double size = 0.0;
  for (int i = 0; i < 4000; ++i) size += std::abs(f(a + (i + 0.5) * (b - a) / 4000)) * (b - a) / 4000;
  return integrate_panels(f, a, b, 200, 1e-14 * size);
}

}  // namespace oracle

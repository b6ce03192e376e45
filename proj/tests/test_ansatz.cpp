#include <doctest.h>

#include <cmath>
#include <random>

#include "mbo/ansatz.hpp"
#include "mbo/geometry.hpp"
#include "mbo/heat.hpp"
#include "mbo/shapes.hpp"
#include "support/oracle.hpp"

using namespace mbo;

namespace {

double erf_of_radius(double R0, const Point& c, const Point& x, double t) {
  const double R = std::sqrt(R0 * R0 - 2 * t);
  return std::erf((R - oracle::distance(x, c)) / (2 * std::sqrt(t)));
}

}  // namespace

TEST_CASE("erf profile") {
  CHECK(ansatz::u0_profile(0.0, 1e-3) == 0.0);
  CHECK(ansatz::u0_profile(1.0, 1e-3) == 1.0);
  CHECK(ansatz::u0_profile(-1.0, 1e-3) == -1.0);
  const double erf1 = oracle::erf_series(1.0);
  CHECK(erf1 == doctest::Approx(0.8427007929).epsilon(1e-10));
  for (double t : {1e-4, 1e-3, 0.02}) CHECK(ansatz::u0_profile(2 * std::sqrt(t), t) == doctest::Approx(erf1).epsilon(1e-15));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-0.1, 0.1);
  for (int i = 0; i < 100; ++i) {
    const double r = u(rng), t = 1e-4 + std::abs(u(rng)) / 10;
    CHECK(ansatz::u0_profile(-r, t) == -ansatz::u0_profile(r, t));
    CHECK(std::abs(ansatz::u0_profile(r, t)) < 1.0);
  }
}

TEST_CASE("erf profile derivative") {
  CHECK(ansatz::u0_r(0.0, 1e-3) == doctest::Approx(1 / std::sqrt(oracle::pi * 1e-3)).epsilon(1e-15));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 200; ++i) {
    const double t = 1e-4 + 1e-2 * u(rng), r = (u(rng) - 0.5) * 8 * std::sqrt(t);
    CHECK(ansatz::u0_r(r, t) == ansatz::u0_r(-r, t));
    const double e = 1e-5 * std::sqrt(t);
    const double fd = (ansatz::u0_profile(r + e, t) - ansatz::u0_profile(r - e, t)) / (2 * e);
    CHECK(std::abs(fd - ansatz::u0_r(r, t)) < 1e-8 * ansatz::u0_r(0.0, t));
  }
}

TEST_CASE("heat residual formula") {
  const std::vector<double> flat{0.0, 0.0};
  CHECK(ansatz::heat_residual(0.013, 1e-3, flat) == 0.0);
  const std::vector<double> k{3.0};
  CHECK(ansatz::heat_residual(0.0, 1e-3, k) == 0.0);
  CHECK_THROWS_AS(ansatz::heat_residual(0.5, 1e-3, k), Error);
}

TEST_CASE("heat residual against finite differences of the erf ansatz") {
  // (∂t − Δ)U⁰ by a fourth-order Laplacian on the grid and a centered time
  // difference, for U⁰ = erf((R(t) − |x − c|)/2√t)
  const GridSpec g{2, 512, 1.0, true};
  const double R0 = 0.3, t = 1e-3, dx = g.spacing(), dt = 1e-8;
  const Point c{0.5, 0.5, 0};
  const double R = std::sqrt(R0 * R0 - 2 * t), band = 6 * std::sqrt(t);
  double worst = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Point x = g.center(i);
    const double r = R - oracle::distance(x, c);
    if (std::abs(r) > band) continue;
    auto u = [&](double ox, double oy, double tt) { return erf_of_radius(R0, c, {x[0] + ox, x[1] + oy, 0}, tt); };
    const double u0 = u(0, 0, t);
    double lap = 0.0;
    for (int axis = 0; axis < 2; ++axis) {
      auto at = [&](int s) { return axis == 0 ? u(s * dx, 0, t) : u(0, s * dx, t); };
      lap += (-at(2) + 16 * at(1) - 30 * u0 + 16 * at(-1) - at(-2)) / (12 * dx * dx);
    }
    const double dudt = (u(0, 0, t + dt) - u(0, 0, t - dt)) / (2 * dt);
    const std::vector<double> kap{1 / R};
    const double formula = ansatz::heat_residual(r, t, kap);
    worst = std::max(worst, std::abs(dudt - lap - formula));
    scale = std::max(scale, std::abs(formula));
  }
  MESSAGE("relative residual error " << worst / scale);
  CHECK(worst / scale < 1e-3);
}

TEST_CASE("U1 vanishes for a flat interface") {
  ansatz::AnsatzContext ctx;
  ctx.grid = {2, 256, 1.0, true};
  ctx.flat = true;
  ctx.axis = 0;
  ctx.offset = 0.5;
  const auto u1 = ansatz::u1_field(ctx, 1e-3);
  double sup = 0.0;
  for (double v : u1.field.values) sup = std::max(sup, std::abs(v));
  CHECK(sup <= 1e-10);
}

TEST_CASE("U0 + U1 reproduces the heat solution of the disk") {
  ansatz::AnsatzContext ctx;
  ctx.grid = {2, 1024, 2.0, true};
  ctx.center = {1.0, 1.0, 0};
  ctx.R0 = 0.3;
  const double h = 1e-3;
  const auto u1 = ansatz::u1_field(ctx, h);
  const auto u0 = ansatz::u0_field(ctx, h);
  const auto full = ansatz::exact_heat_solution(ctx, h);
  const auto band = ansatz::band_mask(ctx, h);
  REQUIRE(u1.field.all_finite());
  double worst = 0.0;
  for (std::size_t i = 0; i < band.size(); ++i)
    if (band[i]) worst = std::max(worst, std::abs(u0.values[i] + u1.field.values[i] - full.values[i]));
  MESSAGE("band sup difference " << worst << " with " << u1.nodes << " nodes");
  CHECK(worst <= 3 * ctx.tolerance);
  CHECK(u1.nodes >= 16);

  // the exact solution itself against the polar-integral oracle
  for (int i : {512 + 140, 512 + 150, 512 + 160}) {
    const std::size_t idx = ctx.grid.index(i, 512);
    const Point x = ctx.grid.center(idx);
    const double mass = oracle::disk_heat_mass(0.3, oracle::distance(x, ctx.center), h);
    CHECK(std::abs(full.values[idx] - (2 * mass - 1)) < 1e-9);
  }
}

TEST_CASE("U1 scales like h") {
  ansatz::AnsatzContext ctx;
  ctx.grid = {2, 1024, 2.0, true};
  ctx.center = {1.0, 1.0, 0};
  ctx.R0 = 0.3;
  const double b0sq = 1 / (0.3 * 0.3);
  std::vector<double> c;
  for (double h : {1e-3, 5e-4, 2.5e-4}) {
    const auto u1 = ansatz::u1_field(ctx, h);
    double sup = 0.0;
    for (double v : u1.field.values) sup = std::max(sup, std::abs(v));
    c.push_back(sup / (b0sq * h));
  }
  MESSAGE("fitted constants " << c[0] << " " << c[1] << " " << c[2]);
  const auto [lo, hi] = std::minmax_element(c.begin(), c.end());
  CHECK(*hi / *lo < 1.25);
}

TEST_CASE("u1_field rejects a narrow band") {
  ansatz::AnsatzContext ctx;
  ctx.grid = {2, 128, 1.0, true};
  ctx.center = {0.5, 0.5, 0};
  ctx.R0 = 0.3;
  ctx.band = 0.5 * std::sqrt(1e-3);
  CHECK_THROWS_AS(ansatz::u1_field(ctx, 1e-3), Error);
}

TEST_CASE("gaussian integral closed forms") {
  CHECK(ansatz::gaussian_integral_1(0.0, 3e-4, 1e-3) == 0.0);
  CHECK(ansatz::gaussian_integral_1(0.05, 3e-4, 1e-3) > 0.0);
  CHECK(ansatz::gaussian_integral_1(-0.05, 3e-4, 1e-3) < 0.0);
  const double t = 3e-4, h = 1e-3;
  CHECK(ansatz::gaussian_integral_2(0.0, t, h) ==
        doctest::Approx(-4 * std::sqrt(oracle::pi) * t / std::pow(h, 1.5)).epsilon(1e-15));
  CHECK(ansatz::gaussian_integral_2(0.07, t, h) == ansatz::gaussian_integral_2(-0.07, t, h));
  CHECK_THROWS_AS(ansatz::gaussian_integral_1(0.1, h, h), Error);
  CHECK_THROWS_AS(ansatz::gaussian_integral_2(0.1, 0.0, h), Error);

  const double q1 = oracle::gaussian_appendix_integral(1, 0.1, 0.3e-3, 1e-3);
  CHECK(std::abs(ansatz::gaussian_integral_1(0.1, 0.3e-3, 1e-3) - q1) < 1e-10 * std::abs(q1));
}

TEST_CASE("gaussian integrals against quadrature on random triples") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0, 1);
  // the second integral changes sign at d0² = 2h, so errors are scaled by
  // the integral of |integrand|; away from that zero the plain relative
  // error is checked too
  double worst1 = 0.0, worst2 = 0.0, rel = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double h = std::pow(10.0, -4 + 2 * u(rng));
    const double t = h * (0.02 + 0.96 * u(rng));
    const double d0 = (u(rng) - 0.5) * 6 * std::sqrt(h);
    const double q1 = oracle::gaussian_appendix_integral(1, d0, t, h), q2 = oracle::gaussian_appendix_integral(2, d0, t, h);
    const double a1 = oracle::gaussian_appendix_integral(1, d0, t, h, true), a2 = oracle::gaussian_appendix_integral(2, d0, t, h, true);
    const double c1 = ansatz::gaussian_integral_1(d0, t, h), c2 = ansatz::gaussian_integral_2(d0, t, h);
    worst1 = std::max(worst1, std::abs(c1 - q1) / a1);
    worst2 = std::max(worst2, std::abs(c2 - q2) / a2);
    if (std::abs(q1) > 1e-2 * a1) rel = std::max(rel, std::abs(c1 - q1) / std::abs(q1));
    if (std::abs(q2) > 1e-2 * a2) rel = std::max(rel, std::abs(c2 - q2) / std::abs(q2));
  }
  MESSAGE("worst scaled errors " << worst1 << " " << worst2 << ", relative " << rel);
  CHECK(worst1 < 1e-10);
  CHECK(worst2 < 1e-10);
  CHECK(rel < 1e-8);
}

TEST_CASE("gauss-legendre nodes integrate polynomials exactly") {
  std::vector<double> x, w;
  ansatz::gauss_legendre(16, x, w);
  for (int p = 0; p < 32; ++p) {
    double s = 0.0;
    for (int i = 0; i < 16; ++i) s += w[i] * std::pow(x[i], p);
    CHECK(s == doctest::Approx(p % 2 ? 0.0 : 2.0 / (p + 1)).epsilon(1e-13));
  }
}

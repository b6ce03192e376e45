#include <doctest.h>

#include <cmath>
#include <random>

#include "mbo/contour.hpp"
#include "mbo/geometry.hpp"
#include "mbo/grid.hpp"
#include "support/oracle.hpp"

using namespace mbo;
namespace geo = mbo::geometry;

namespace {

GridSpec grid2(int n) { return GridSpec{2, n, 1.0, true}; }

ScalarField distance_field(const GridSpec& g, Point c, double R) {
  ScalarField f(g);
  for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] = R - oracle::distance(g.center(i), c, g.dim);
  return f;
}

double brute_signed(const Contour& c, const Point& x, bool inside) {
  double best = 1e300;
  for (const auto& s : c.segments)
    best = std::min(best, oracle::point_segment(x, c.vertices[s[0]], c.vertices[s[1]]));
  return inside ? best : -best;
}

}  // namespace

TEST_CASE("signed distance of a circle") {
  const auto g = grid2(256);
  const auto circle = make_ellipse_contour({0.5, 0.5, 0}, 0.3, 0.3, 4000);
  const auto sdf = geo::signed_distance(circle, g, 0.35);
  // a cell about 0.1 outside the circle
  const int i = static_cast<int>((0.5 + 0.4) * 256);
  const std::size_t out = g.index(i, 128);
  const double expect_out = 0.3 - oracle::distance(g.center(out), {0.5, 0.5, 0});
  CHECK(std::abs(expect_out + 0.1) < g.spacing());
  CHECK(std::abs(sdf.r.values[out] - expect_out) < g.spacing());
  const std::size_t mid = g.index(128, 128);
  CHECK(std::abs(sdf.r.values[mid] - 0.3) < g.spacing());
}

TEST_CASE("signed distance agrees with brute force") {
  const auto g = grid2(128);
  const auto ellipse = make_ellipse_contour({0.5, 0.5, 0}, 0.3, 0.2, 500);
  const double band = 0.08;
  const auto fast = geo::signed_distance(ellipse, g, band);
  const auto brute = geo::signed_distance_brute_force(ellipse, g, band);
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> pick(0, g.size() - 1);
  int checked = 0;
  for (int n = 0; n < 4000; ++n) {
    const std::size_t i = pick(rng);
    const Point x = g.center(i);
    const double u = (x[0] - 0.5) / 0.3, v = (x[1] - 0.5) / 0.2;
    const double exact = brute_signed(ellipse, x, u * u + v * v < 1);
    if (std::abs(exact) >= band) {
      CHECK(std::abs(fast.r.values[i]) == band);
      continue;
    }
    ++checked;
    CHECK(std::abs(fast.r.values[i] - exact) < 1e-12);
    CHECK(std::abs(brute.r.values[i] - exact) < 1e-12);
  }
  CHECK(checked > 500);
}

TEST_CASE("signed distance errors") {
  Contour open = make_polygon_contour({{0.3, 0.3, 0}, {0.7, 0.3, 0}, {0.5, 0.7, 0}});
  open.segments.pop_back();
  try {
    geo::signed_distance(open, grid2(64), 0.1);
    FAIL("expected an open-contour error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::OpenContour);
  }
}

TEST_CASE("hausdorff examples") {
  const auto a = make_ellipse_contour({0, 0, 0}, 1.0, 1.0, 2000);
  const auto b = make_ellipse_contour({0, 0, 0}, 1.2, 1.2, 2000);
  CHECK(geo::hausdorff(a, b, 1e-3) == doctest::Approx(0.2).epsilon(1e-4));
  // resampled points sit on the segments up to rounding
  CHECK(geo::hausdorff(a, a, 1e-3) < 1e-15);
  const auto pa = oracle::circle_points(0, 0, 0.5, 600), pb = oracle::circle_points(0.13, 0, 0.5, 600);
  CHECK(geo::hausdorff(pa, pb) == doctest::Approx(oracle::hausdorff_points(pa, pb)).epsilon(1e-14));
  CHECK(geo::hausdorff(pa, pb) == doctest::Approx(0.13).epsilon(0.01));
  std::vector<Point> none;
  CHECK_THROWS_AS(geo::hausdorff(none, pa), Error);
}

TEST_CASE("curvature of distance fields") {
  {
    const auto g = grid2(512);
    const double R = 0.3;
    const auto u = distance_field(g, {0.5, 0.5, 0}, R);
    const auto k = geo::curvature_from_field(u);
    const auto c = extract_contour(u, 0.0);
    for (double v : geo::sample_at_vertices(k.value, c)) CHECK(std::abs(v * R - 1) < 0.03);
  }
  {
    const auto g = grid2(128);
    ScalarField line(g);
    for (std::size_t i = 0; i < line.values.size(); ++i) line.values[i] = 0.5 - g.center(i)[0];
    const auto k = geo::curvature_from_field(line);
    for (double v : k.value.values) CHECK(std::abs(v) < 1e-3);
  }
  {
    const GridSpec g{3, 128, 1.0, true};
    const double R = 0.3;
    const auto u = distance_field(g, {0.5, 0.5, 0.5}, R);
    const auto k = geo::curvature_from_field(u);
    const auto c = extract_contour(u, 0.0);
    for (double v : geo::sample_at_vertices(k.value, c)) CHECK(std::abs(v * R / 2 - 1) < 0.05);
  }
}

TEST_CASE("vanishing gradients are masked") {
  const auto g = grid2(64);
  ScalarField u(g, 1.0);
  const auto k = geo::curvature_from_field(u);
  for (auto m : k.masked) CHECK(m == 1);
  for (double v : k.value.values) CHECK(v == 0.0);
}

TEST_CASE("weingarten map of graphs") {
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(2);
  Eigen::MatrixXd d(2, 2);
  d << 3.0, 0.0, 0.0, -2.0;
  CHECK((geo::weingarten_graph(zero, d) - d).norm() < 1e-15);

  // the lower cap of the sphere of radius R centered at (0, 0, R):
  // f = R − √(R² − |x|²), at the apex ∇f = 0 and ∇²f = I/R
  const double R = 0.7;
  const Eigen::MatrixXd cap = Eigen::MatrixXd::Identity(2, 2) / R;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(geo::weingarten_graph(zero, cap));
  CHECK(es.eigenvalues()[0] == doctest::Approx(1 / R));
  CHECK(es.eigenvalues()[1] == doctest::Approx(1 / R));

  std::mt19937_64 rng(5);
  std::normal_distribution<double> n01;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 2;
    Eigen::VectorXd gr(n);
    Eigen::MatrixXd hs(n, n);
    for (int i = 0; i < n; ++i) gr[i] = n01(rng);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) hs(i, j) = hs(j, i) = n01(rng);
    // div(∇f/√(1+|∇f|²)) expanded by hand
    const double q = 1 + gr.squaredNorm();
    const double div = (hs.trace() * q - gr.dot(hs * gr)) / std::pow(q, 1.5);
    CHECK(std::abs(geo::weingarten_graph(gr, hs).trace() - div) < 1e-12 * (1 + std::abs(div)));
    CHECK(std::abs(geo::mean_curvature_graph(gr, hs) - div) < 1e-12 * (1 + std::abs(div)));
  }
}

TEST_CASE("offset curvatures") {
  const double R = 0.4;
  for (double r0 : {0.1, -0.2, 0.35}) {
    const std::vector<double> k{1 / R, 1 / R};
    const auto s = geo::offset_curvatures(k, r0);
    for (double v : s.kappas) CHECK(v == doctest::Approx(1 / (R - r0)).epsilon(1e-15));
  }
  const std::vector<double> k{2.0, -1.0, 0.5};
  const auto same = geo::offset_curvatures(k, 0.0);
  CHECK(same.kappas == k);
  CHECK(same.mean_sum == 1.5);
  CHECK(same.weingarten_norm == doctest::Approx(std::sqrt(4 + 1 + 0.25)));

  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> ks{u(rng), u(rng)};
    const double r0 = 0.9 * u(rng) / 3 / std::max(std::abs(ks[0]), std::abs(ks[1]));
    const auto s = geo::offset_curvatures(ks, r0);
    double extra = 0.0;
    for (double v : ks) extra += v * v / (1 - r0 * v);
    CHECK(std::abs(s.mean_sum - (ks[0] + ks[1] + r0 * extra)) < 1e-14 * (1 + std::abs(s.mean_sum)));
  }
  const std::vector<double> big{4.0};
  try {
    geo::offset_curvatures(big, 0.25);
    FAIL("expected focal crossing");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::FocalCrossing);
  }
}

TEST_CASE("psi") {
  const std::vector<double> k{1.5, -2.0};
  CHECK(geo::psi(0.0, k) == doctest::Approx(1.5 * 1.5 + 4.0).epsilon(1e-15));
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 200; ++trial) {
    const double kappa = 5 * u(rng), r = 0.9 * u(rng) / std::abs(kappa);
    const std::vector<double> one{kappa};
    CHECK(std::abs(geo::psi(r, one) * (1 - r * kappa) - kappa * kappa) < 1e-13 * kappa * kappa + 1e-300);
    std::vector<double> ks{3 * u(rng), 3 * u(rng)};
    const double rr = 0.3 * u(rng);
    const auto s0 = geo::make_sample(ks);
    const auto sr = geo::offset_curvatures(ks, rr);
    CHECK(std::abs((sr.mean_sum - s0.mean_sum) - rr * geo::psi(rr, ks)) < 1e-14 * (1 + std::abs(sr.mean_sum)));
  }
  const std::vector<double> focal{2.0};
  CHECK_THROWS_AS(geo::psi(0.5, focal), Error);
}

TEST_CASE("intrinsic distance") {
  const double R = 0.3;
  const auto circle = make_ellipse_contour({0.5, 0.5, 0}, R, R, 4000);
  const Point p{0.5 + R, 0.5, 0}, q{0.5 - R, 0.5, 0};
  CHECK(geo::intrinsic_distance(circle, p, q) == doctest::Approx(oracle::pi * R).epsilon(1e-5));
  CHECK(geo::intrinsic_distance(circle, p, p) == 0.0);
  CHECK_THROWS_AS(geo::intrinsic_distance(circle, p, {0.5, 0.5, 0}), Error);

  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Point> poly;
    const int n = 8 + trial;
    for (int i = 0; i < n; ++i) {
      const double s = 2 * oracle::pi * (i + 0.3 * u(rng)) / n, r = 0.2 + 0.1 * u(rng);
      poly.push_back({0.5 + r * std::cos(s), 0.5 + r * std::sin(s), 0});
    }
    const auto c = make_polygon_contour(poly);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        CHECK(geo::intrinsic_distance(c, poly[a], poly[b]) ==
              doctest::Approx(oracle::polygon_path(poly, a, b)).epsilon(1e-14));
  }
}

TEST_CASE("ball radius") {
  const auto circle = make_ellipse_contour({0.5, 0.5, 0}, 0.3, 0.3, 2000);
  CHECK(std::abs(geo::ball_radius(circle).radius - 0.3) / 0.3 < 0.02);
  const auto ellipse = make_ellipse_contour({0.5, 0.5, 0}, 0.4, 0.2, 4000);
  const double dense = oracle::ellipse_min_radius(0.4, 0.2);
  CHECK(dense == doctest::Approx(0.1).epsilon(1e-6));
  CHECK(std::abs(geo::ball_radius(ellipse).radius - dense) / dense < 0.05);

  // a figure eight drawn as one closed polyline
  std::vector<Point> eight;
  for (int i = 0; i < 200; ++i) {
    const double s = 2 * oracle::pi * i / 200;
    eight.push_back({0.5 + 0.3 * std::sin(s), 0.5 + 0.15 * std::sin(2 * s), 0});
  }
  const auto br = geo::ball_radius(make_polygon_contour(eight));
  CHECK(br.self_intersecting);
  CHECK(br.radius == 0.0);
}

TEST_CASE("pair minimum m of a circle") {
  // the closest pair at intrinsic distance ≥ r★ is the chord of arc r★
  const double R = 0.3;
  const auto circle = make_ellipse_contour({0.5, 0.5, 0}, R, R, 3000);
  const auto br = geo::ball_radius(circle, 1.0, 1 / 0.2);
  CHECK(br.r_star == doctest::Approx(0.2));
  CHECK(br.m == doctest::Approx(2 * R * std::sin(0.2 / (2 * R))).epsilon(1e-4));
}

TEST_CASE("arc fit on a circle") {
  const auto g = grid2(512);
  const double R = 0.25;
  const auto c = extract_contour(distance_field(g, {0.5, 0.5, 0}, R), 0.0);
  const auto fit = geo::arc_fit(c, 0.03);
  for (std::size_t i = 0; i < c.vertices.size(); ++i) {
    CHECK(std::abs(fit.kappa[i] * R - 1) < 0.01);
    const double rx = c.vertices[i][0] - 0.5, ry = c.vertices[i][1] - 0.5;
    CHECK((fit.normals[i][0] * rx + fit.normals[i][1] * ry) / std::hypot(rx, ry) > 0.999);
  }
}

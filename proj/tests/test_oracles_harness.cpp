#include <doctest.h>

#include <cmath>
#include <sstream>

#include "mbo/contour.hpp"
#include "mbo/oracles.hpp"
#include "mbo/scheme.hpp"
#include "mbo/shapes.hpp"
#include "mbo/study.hpp"
#include "support/oracle.hpp"

using namespace mbo;

TEST_CASE("exact sphere radius") {
  CHECK(oracles::exact_sphere_radius(0.3, 1, 0.0) == 0.3);
  CHECK(oracles::exact_sphere_radius(0.3, 1, 0.01) == doctest::Approx(std::sqrt(0.07)).epsilon(1e-15));
  CHECK(oracles::exact_sphere_radius(0.3, 2, 0.01) == doctest::Approx(std::sqrt(0.05)).epsilon(1e-15));
  CHECK_THROWS_AS(oracles::exact_sphere_radius(0.3, 1, 0.045), Error);
  CHECK_THROWS_AS(oracles::exact_sphere_radius(0.3, 1, 0.05), Error);
}

TEST_CASE("ball heat mass against test quadrature") {
  for (double rho : {0.0, 0.1, 0.28, 0.3, 0.32, 0.4}) {
    CHECK(std::abs(oracles::ball_heat_mass(0.3, rho, 1e-3, 2) - oracle::disk_heat_mass(0.3, rho, 1e-3)) < 1e-11);
    CHECK(std::abs(oracles::ball_heat_mass(0.3, rho, 1e-3, 3) - oracle::ball_heat_mass_3d(0.3, rho, 1e-3)) < 1e-11);
  }
}

TEST_CASE("radial oracle step") {
  for (double h : {1e-3, 1e-4, 3e-5}) {
    const double R0 = 0.3;
    const auto step = oracles::radial_mbo_step_oracle(R0, h, 2);
    CHECK_FALSE(step.extinct);
    const double test = oracle::bisect([&](double r) { return 2 * oracle::disk_heat_mass(R0, r, h) - 1; }, 0.0, R0,
                                       1e-13);
    CHECK(std::abs(step.radius - test) < 1e-11);
    // error against the flow law is O(h²)
    CHECK(std::abs(step.radius - std::sqrt(R0 * R0 - 2 * h)) < 10 * h * h / std::pow(R0, 3));
  }
  const auto s3 = oracles::radial_mbo_step_oracle(0.3, 1e-3, 3);
  const double t3 = oracle::bisect([&](double r) { return 2 * oracle::ball_heat_mass_3d(0.3, r, 1e-3) - 1; }, 0.0, 0.3, 1e-13);
  CHECK(std::abs(s3.radius - t3) < 1e-10);
  CHECK(std::abs(s3.radius - std::sqrt(0.09 - 4e-3)) < 1e-4);

  // tiny steps leave the radius alone
  CHECK(oracles::radial_mbo_step_oracle(0.3, 1e-9, 2).radius == doctest::Approx(0.3).epsilon(1e-7));
  CHECK(oracles::radial_mbo_step_oracle(0.04, 1e-3, 2).extinct);
}

TEST_CASE("grid step agrees with the radial oracle within a spacing") {
  const GridSpec g{2, 1024, 1.0, true};
  for (double h : {1e-3, 3e-4, 1e-4}) {
    double measured = 0.0;
    scheme::MboConfig cfg;
    cfg.h = h;
    cfg.steps = 1;
    scheme::run(indicator_from_shape(Ball{{0.5, 0.5, 0}, 0.3}, g), cfg, 0.0,
                [&](int, const ScalarField& u, const PhaseField&) {
                  measured = study::contour_equivalent_radius(extract_contour(u, 0.0));
                });
    CHECK(std::abs(measured - oracles::radial_mbo_step_oracle(0.3, h, 2).radius) < g.spacing());
  }
}

TEST_CASE("consistency study") {
  auto cfg = study::default_config(study::StudyKind::Consistency);
  const auto rep = study::consistency_study(cfg);
  REQUIRE(rep.rows.size() >= 4);
  CHECK(rep.fitted);
  CHECK(rep.slope >= 1.4);
  CHECK(rep.pass);
  CHECK(rep.ci_low <= rep.slope);
  CHECK(rep.slope <= rep.ci_high);
  // independent fit of the same rows
  std::vector<double> x, y;
  for (const auto& r : rep.rows) x.push_back(r.x), y.push_back(r.error);
  CHECK(oracle::loglog_slope(x, y) == doctest::Approx(rep.slope).epsilon(1e-12));

  // doubling R0 lowers every error
  auto wide = cfg;
  wide.shape = Ball{{0.5, 0.5, 0}, 0.4};
  const auto rep_wide = study::consistency_study(wide);
  for (std::size_t i = 0; i < rep.rows.size(); ++i) CHECK(rep_wide.rows[i].error < rep.rows[i].error);
}

TEST_CASE("slope fit") {
  std::vector<study::ReportRow> rows{{1e-3, 2.0, {}}, {1e-4, 2.0, {}}, {1e-5, 2.0, {}}};
  CHECK_THROWS_AS(study::fit_loglog_slope(rows), Error);
  rows[1].error = 0.0;
  CHECK_THROWS_AS(study::fit_loglog_slope(rows), Error);
  std::vector<study::ReportRow> pow{{1e-3, 1e-6, {}}, {1e-4, 1e-8, {}}, {1e-5, 1e-10, {}}};
  CHECK(study::fit_loglog_slope(pow) == doctest::Approx(2.0).epsilon(1e-12));
  const auto [lo, hi] = study::bootstrap_slope_ci(pow, 3, 200);
  CHECK(lo == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(hi == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("gronwall potential") {
  CHECK(oracles::gronwall_phi(1.0, 0.7) == 0.0);
  CHECK(oracles::gronwall_phi(3.0, 0.0) == doctest::Approx(std::log(3.0)).epsilon(1e-15));
  // Φ by quadrature of its definition
  for (double D : {0.01, 0.5, 3.0})
    for (double x : {0.5, 2.0, 7.0}) {
      const double q = oracle::integrate([&](double s) { return 1 / (s + D * s * s * s); }, 1.0, x, 1e-14);
      CHECK(std::abs(oracles::gronwall_phi(x, D) - q) < 1e-10);
      CHECK(oracles::gronwall_phi_inv(oracles::gronwall_phi(x, D), D) == doctest::Approx(x).epsilon(1e-10));
    }
  CHECK(std::isinf(oracles::gronwall_phi_inv(0.5 * std::log(1.5 / 0.5), 0.5)));
}

TEST_CASE("config parsing") {
  const auto cfg = study::parse_config(R"({"study":"radius-law","cells":256,"h":1e-4,"steps":10})");
  CHECK(cfg.kind == study::StudyKind::RadiusLaw);
  CHECK(cfg.cells == std::vector<int>{256});
  CHECK(cfg.h == std::vector<double>{1e-4});
  CHECK(cfg.steps == 10);
  auto kind_of = [](const std::string& text) {
    try {
      study::parse_config(text);
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::InvalidArgument;
  };
  CHECK(kind_of(R"({"study":"consistency","colour":3})") == ErrorKind::Config);
  CHECK(kind_of(R"({"study":"consistency","h":[1e-3,1e-4]})") == ErrorKind::Config);
  CHECK(kind_of(R"({"study":"nonsense"})") == ErrorKind::Config);
  CHECK(kind_of("{not json") == ErrorKind::Config);
  try {
    study::load_config("/nonexistent/dir/config.json");
    FAIL("expected an io error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Io);
  }
  // round trip through the writer
  const auto back = study::parse_config(study::config_to_json(cfg));
  CHECK(back.cells == cfg.cells);
  CHECK(back.h == cfg.h);
  CHECK(back.steps == cfg.steps);
}

TEST_CASE("reports are deterministic") {
  const auto cfg = study::default_config(study::StudyKind::Consistency);
  std::ostringstream a, b;
  study::write_csv(study::consistency_study(cfg), a);
  study::write_csv(study::consistency_study(cfg), b);
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("h,", 0) == 0);
  const auto js = study::summary_json(study::consistency_study(cfg));
  CHECK(js.find("\"slope\"") != std::string::npos);
  CHECK(js.find("\"pass\"") != std::string::npos);
}

TEST_CASE("identity suites pass") {
  for (const auto& s : study::verify_identities(1)) {
    INFO(s.name << " " << s.max_error << " / " << s.tolerance);
    CHECK(s.pass);
  }
}

TEST_CASE("equivalent radius of a polygon") {
  CHECK(study::contour_equivalent_radius(make_ellipse_contour({0.5, 0.5, 0}, 0.3, 0.3, 4000)) ==
        doctest::Approx(0.3).epsilon(1e-6));
}

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "mbo/scheme.hpp"
#include "mbo/study.hpp"

namespace mbo::study {

using nlohmann::json;

const char* to_string(StudyKind kind) {
  switch (kind) {
    case StudyKind::Consistency: return "consistency";
    case StudyKind::RadiusLaw: return "radius-law";
    case StudyKind::Stability: return "stability";
    case StudyKind::JumpError: return "jump-error";
    case StudyKind::Perimeter: return "perimeter";
    case StudyKind::Topology: return "topology";
  }
  return "?";
}

namespace {

StudyKind kind_from(const std::string& s) {
  for (auto k : {StudyKind::Consistency, StudyKind::RadiusLaw, StudyKind::Stability,
                 StudyKind::JumpError, StudyKind::Perimeter, StudyKind::Topology})
    if (s == to_string(k)) return k;
  throw Error(ErrorKind::Config, "unknown study '" + s + "'");
}

Point point_from(const json& j) {
  if (!j.is_array() || j.size() < 2 || j.size() > 3)
    throw Error(ErrorKind::Config, "points are arrays of 2 or 3 numbers");
  Point p{0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < j.size(); ++i) p[i] = j[i].get<double>();
  return p;
}

json point_to(const Point& p, int dim) {
  json j = json::array();
  for (int i = 0; i < dim; ++i) j.push_back(p[i]);
  return j;
}

Ball ball_from(const json& j) { return {point_from(j.at("center")), j.at("radius").get<double>()}; }

Shape shape_from(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "ball") return ball_from(j);
  if (kind == "half_space") return HalfSpace{j.value("axis", 0), j.value("offset", 0.5)};
  if (kind == "ellipse" || kind == "ellipsoid")
    return Ellipsoid{point_from(j.at("center")), point_from(j.at("semi_axes"))};
  if (kind == "cuboid") return Cuboid{point_from(j.at("center")), point_from(j.at("half_widths"))};
  if (kind == "dumbbell")
    return Dumbbell{point_from(j.at("left")), point_from(j.at("right")),
                    j.at("radius").get<double>(), j.at("neck_radius").get<double>()};
  if (kind == "ball_union") {
    BallUnion u;
    for (const auto& b : j.at("balls")) u.balls.push_back(ball_from(b));
    return u;
  }
  throw Error(ErrorKind::Config, "unknown shape kind '" + kind + "'");
}

json shape_to(const Shape& shape, int dim) {
  return std::visit(
      [&](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return {{"kind", "ball"}, {"center", point_to(s.center, dim)}, {"radius", s.radius}};
        } else if constexpr (std::is_same_v<T, HalfSpace>) {
          return {{"kind", "half_space"}, {"axis", s.axis}, {"offset", s.offset}};
        } else if constexpr (std::is_same_v<T, Ellipsoid>) {
          return {{"kind", "ellipse"}, {"center", point_to(s.center, dim)},
                  {"semi_axes", point_to(s.semi_axes, dim)}};
        } else if constexpr (std::is_same_v<T, Cuboid>) {
          return {{"kind", "cuboid"}, {"center", point_to(s.center, dim)},
                  {"half_widths", point_to(s.half_widths, dim)}};
        } else if constexpr (std::is_same_v<T, Dumbbell>) {
          return {{"kind", "dumbbell"}, {"left", point_to(s.left, dim)},
                  {"right", point_to(s.right, dim)}, {"radius", s.radius},
                  {"neck_radius", s.neck_radius}};
        } else {
          json balls = json::array();
          for (const auto& b : s.balls)
            balls.push_back({{"center", point_to(b.center, dim)}, {"radius", b.radius}});
          return {{"kind", "ball_union"}, {"balls", balls}};
        }
      },
      shape);
}

}  // namespace

StudyConfig default_config(StudyKind kind) {
  StudyConfig c;
  c.kind = kind;
  switch (kind) {
    case StudyKind::Consistency:
      break;
    case StudyKind::RadiusLaw:
      c.h = {2e-4};
      c.steps = 50;
      break;
    case StudyKind::Stability:
      c.h = {1e-4};
      c.steps = 100;
      c.shape = Ellipsoid{{0.5, 0.5, 0.5}, {0.4, 0.2, 0.2}};
      c.delta_check = false;
      break;
    case StudyKind::JumpError:
      c.h = {4e-4, 2e-4, 1e-4};
      c.horizon = 1e-2;
      break;
    case StudyKind::Perimeter:
      c.cells = {128, 256, 512, 1024};
      c.slope_threshold = 1.0;
      break;
    case StudyKind::Topology:
      // a planar curve never pinches, so the neck pinch is a 3D run
      c.dim = 3;
      c.cells = {128};
      c.h = {2.5e-4};
      c.steps = 20;
      c.shape = Dumbbell{{0.28, 0.5, 0.5}, {0.72, 0.5, 0.5}, 0.15, 0.06};
      c.delta_check = false;
      break;
  }
  return c;
}

GridSpec StudyConfig::grid(int level) const {
  GridSpec g{dim, cells.at(level), extent, true};
  g.validate();
  return g;
}

void StudyConfig::validate() const {
  auto fail = [](const std::string& m) { throw Error(ErrorKind::Config, m); };
  if (dim != 2 && dim != 3) fail("dim must be 2 or 3");
  if (cells.empty()) fail("cells ladder is empty");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    try {
      grid(static_cast<int>(i));
    } catch (const Error& e) {
      fail(std::string("bad grid: ") + e.what());
    }
  }
  if (h.empty()) fail("h ladder is empty");
  for (double v : h)
    if (!(v > 0.0)) fail("h values must be positive");
  const bool ladder = kind == StudyKind::Consistency || kind == StudyKind::JumpError;
  if (ladder && h.size() < 3) fail("need at least 3 h values for a slope fit");
  if (kind == StudyKind::Perimeter && cells.size() < 3) fail("need at least 3 grids for a slope fit");
  if (steps < 1) fail("steps must be >= 1");
  if (kind == StudyKind::Stability && steps <= fit_steps) fail("steps must exceed fit_steps");
  if (fit_steps < 1) fail("fit_steps must be >= 1");
  if (bootstrap < 10) fail("bootstrap needs at least 10 resamples");
  const bool radial = kind == StudyKind::Consistency || kind == StudyKind::RadiusLaw ||
                      kind == StudyKind::JumpError || kind == StudyKind::Perimeter;
  if (radial && !std::holds_alternative<Ball>(shape)) fail("this study needs a ball");
  if (kind == StudyKind::Stability) {
    if (dim != 2) fail("the stability study is 2D");
    if (!std::holds_alternative<Ball>(shape) && !std::holds_alternative<Ellipsoid>(shape))
      fail("the stability study needs a circle or an ellipse");
  }
  if (kind == StudyKind::JumpError && !(horizon > 0.0)) fail("horizon must be positive");
  if (delta_check) {
    const double b0 = max_weingarten_norm(shape, dim);
    if (!std::isfinite(b0)) fail("delta_check needs a shape with bounded curvature");
    for (double v : h)
      if (!scheme::step_conditions(v, b0, 0.0, 0.0).local_ok) {
        std::ostringstream m;
        m << "h = " << v << " violates ||B0|| (h |log h|)^(1/4) <= 1 for ||B0|| = " << b0;
        fail(m.str());
      }
  }
}

StudyConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Config, std::string("malformed config: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::Config, "config must be a JSON object");
  try {
    StudyConfig c = default_config(kind_from(j.value("study", std::string("consistency"))));
    static const char* known[] = {"study", "dim", "cells", "extent", "h", "steps", "horizon",
                                  "shape", "delta_check", "rho", "c_star", "fit_steps",
                                  "slope_threshold", "radius_tolerance", "seed", "bootstrap"};
    for (const auto& [key, value] : j.items()) {
      if (std::find(std::begin(known), std::end(known), key) == std::end(known))
        throw Error(ErrorKind::Config, "unknown config key '" + key + "'");
    }
    c.dim = j.value("dim", c.dim);
    if (j.contains("cells")) {
      c.cells = j["cells"].is_array() ? j["cells"].get<std::vector<int>>()
                                      : std::vector<int>{j["cells"].get<int>()};
    }
    c.extent = j.value("extent", c.extent);
    if (j.contains("h")) {
      c.h = j["h"].is_array() ? j["h"].get<std::vector<double>>()
                              : std::vector<double>{j["h"].get<double>()};
    }
    c.steps = j.value("steps", c.steps);
    c.horizon = j.value("horizon", c.horizon);
    if (j.contains("shape")) c.shape = shape_from(j["shape"]);
    c.delta_check = j.value("delta_check", c.delta_check);
    c.rho = j.value("rho", c.rho);
    c.c_star = j.value("c_star", c.c_star);
    c.fit_steps = j.value("fit_steps", c.fit_steps);
    c.slope_threshold = j.value("slope_threshold", c.slope_threshold);
    c.radius_tolerance = j.value("radius_tolerance", c.radius_tolerance);
    c.seed = j.value("seed", c.seed);
    c.bootstrap = j.value("bootstrap", c.bootstrap);
    c.validate();
    return c;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Config, std::string("bad config value: ") + e.what());
  }
}

StudyConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open config '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_json(const StudyConfig& c) {
  json j = {{"study", to_string(c.kind)},
            {"dim", c.dim},
            {"cells", c.cells},
            {"extent", c.extent},
            {"h", c.h},
            {"steps", c.steps},
            {"horizon", c.horizon},
            {"shape", shape_to(c.shape, c.dim)},
            {"delta_check", c.delta_check},
            {"rho", c.rho},
            {"c_star", c.c_star},
            {"fit_steps", c.fit_steps},
            {"slope_threshold", c.slope_threshold},
            {"radius_tolerance", c.radius_tolerance},
            {"seed", c.seed},
            {"bootstrap", c.bootstrap}};
  return j.dump(2);
}

}  // namespace mbo::study

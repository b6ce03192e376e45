#include "mbo/shapes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "mbo/kernels.hpp"

namespace mbo {

namespace {

double sq_dist(const Point& a, const Point& b, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

struct Bounds {
  Point lo{}, hi{};
};

Bounds ball_bounds(const Ball& b) {
  Bounds r;
  for (int i = 0; i < 3; ++i) {
    r.lo[i] = b.center[i] - b.radius;
    r.hi[i] = b.center[i] + b.radius;
  }
  return r;
}

Bounds merge(const Bounds& a, const Bounds& b) {
  Bounds r;
  for (int i = 0; i < 3; ++i) {
    r.lo[i] = std::min(a.lo[i], b.lo[i]);
    r.hi[i] = std::max(a.hi[i], b.hi[i]);
  }
  return r;
}

Bounds bounds_of(const Shape& shape) {
  return std::visit(
      [](const auto& s) -> Bounds {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return ball_bounds(s);
        } else if constexpr (std::is_same_v<T, BallUnion>) {
          if (s.balls.empty()) throw Error(ErrorKind::InvalidArgument, "empty ball union");
          Bounds b = ball_bounds(s.balls.front());
          for (const auto& ball : s.balls) b = merge(b, ball_bounds(ball));
          return b;
        } else if constexpr (std::is_same_v<T, Dumbbell>) {
          return merge(ball_bounds({s.left, std::max(s.radius, s.neck_radius)}),
                       ball_bounds({s.right, std::max(s.radius, s.neck_radius)}));
        } else if constexpr (std::is_same_v<T, Ellipsoid>) {
          Bounds b;
          for (int i = 0; i < 3; ++i) {
            b.lo[i] = s.center[i] - s.semi_axes[i];
            b.hi[i] = s.center[i] + s.semi_axes[i];
          }
          return b;
        } else if constexpr (std::is_same_v<T, Cuboid>) {
          Bounds b;
          for (int i = 0; i < 3; ++i) {
            b.lo[i] = s.center[i] - s.half_widths[i];
            b.hi[i] = s.center[i] + s.half_widths[i];
          }
          return b;
        } else {
          return {};
        }
      },
      shape);
}

}  // namespace

bool contains(const Shape& shape, const Point& x, int dim) {
  return std::visit(
      [&](const auto& s) -> bool {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return sq_dist(x, s.center, dim) < s.radius * s.radius;
        } else if constexpr (std::is_same_v<T, HalfSpace>) {
          return x[s.axis] < s.offset;
        } else if constexpr (std::is_same_v<T, BallUnion>) {
          return std::any_of(s.balls.begin(), s.balls.end(), [&](const Ball& b) {
            return sq_dist(x, b.center, dim) < b.radius * b.radius;
          });
        } else if constexpr (std::is_same_v<T, Dumbbell>) {
          if (sq_dist(x, s.left, dim) < s.radius * s.radius) return true;
          if (sq_dist(x, s.right, dim) < s.radius * s.radius) return true;
          Point p = x, a = s.left, b = s.right;
          if (dim == 2) p[2] = a[2] = b[2] = 0.0;
          const Point c = kernels::closest_on_segment(p, a, b);
          return sq_dist(p, c, dim) < s.neck_radius * s.neck_radius;
        } else if constexpr (std::is_same_v<T, Ellipsoid>) {
          double q = 0.0;
          for (int i = 0; i < dim; ++i) {
            const double u = (x[i] - s.center[i]) / s.semi_axes[i];
            q += u * u;
          }
          return q < 1.0;
        } else {
          for (int i = 0; i < dim; ++i)
            if (std::abs(x[i] - s.center[i]) >= s.half_widths[i]) return false;
          return true;
        }
      },
      shape);
}

double max_weingarten_norm(const Shape& shape, int dim) {
  const int n = dim - 1;
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Ball>) {
          return std::sqrt(static_cast<double>(n)) / s.radius;
        } else if constexpr (std::is_same_v<T, HalfSpace>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, BallUnion>) {
          double best = 0.0;
          for (const auto& b : s.balls) best = std::max(best, std::sqrt(double(n)) / b.radius);
          return best;
        } else if constexpr (std::is_same_v<T, Ellipsoid>) {
          // Attained at the tips of the longest axis.
          std::array<double, 3> ax{s.semi_axes[0], s.semi_axes[1], dim == 3 ? s.semi_axes[2] : 0.0};
          std::sort(ax.begin(), ax.begin() + dim, std::greater<>());
          if (dim == 2) return ax[0] / (ax[1] * ax[1]);
          const double k1 = ax[0] / (ax[1] * ax[1]), k2 = ax[0] / (ax[2] * ax[2]);
          return std::sqrt(k1 * k1 + k2 * k2);
        } else {
          return std::numeric_limits<double>::infinity();
        }
      },
      shape);
}

double shape_clearance(const Shape& shape, const GridSpec& grid) {
  if (std::holds_alternative<HalfSpace>(shape)) return std::numeric_limits<double>::infinity();
  const Bounds b = bounds_of(shape);
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid.dim; ++i) best = std::min({best, b.lo[i], grid.extent - b.hi[i]});
  return best;
}

PhaseField indicator_from_shape(const Shape& shape, const GridSpec& grid) {
  grid.validate();
  const double required = 0.1 * grid.extent;
  const double clearance = shape_clearance(shape, grid);
  if (clearance < required - 1e-12 * grid.extent) {
    std::ostringstream msg;
    msg << "shape clearance " << clearance << " below required " << required;
    throw Error(ErrorKind::Clearance, msg.str());
  }
  PhaseField out(grid);
  const auto n = static_cast<std::ptrdiff_t>(grid.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) out.bits[i] = contains(shape, grid.center(i), grid.dim);
  return out;
}

std::string shape_name(const Shape& shape) {
  static constexpr const char* names[] = {"ball", "half-space", "ball-union",
                                          "dumbbell", "ellipsoid", "cuboid"};
  return names[shape.index()];
}

}  // namespace mbo

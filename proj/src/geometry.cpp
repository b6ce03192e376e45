#include "mbo/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <queue>

namespace mbo::geometry {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Point sub(const Point& a, const Point& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
Point add(const Point& a, const Point& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
Point scale(const Point& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }
double dot(const Point& a, const Point& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
Point cross(const Point& a, const Point& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
double norm(const Point& a) { return std::sqrt(dot(a, a)); }
Point unit(const Point& a) {
  const double n = norm(a);
  return n > 0.0 ? scale(a, 1.0 / n) : a;
}

// Closest point on an element together with the feature it lies on:
// 0..2 vertex, 3..5 edge (3 + index of the edge's first vertex), 6 face.
struct Closest {
  Point point;
  int feature;
};

Closest closest_on_segment(const Point& p, const Point& a, const Point& b) {
  const Point ab = sub(b, a);
  const double len2 = dot(ab, ab);
  if (len2 == 0.0) return {a, 0};
  const double t = dot(sub(p, a), ab) / len2;
  if (t <= 0.0) return {a, 0};
  if (t >= 1.0) return {b, 1};
  return {add(a, scale(ab, t)), 6};
}

// Ericson, Real-Time Collision Detection, 5.1.5.
Closest closest_on_triangle(const Point& p, const Point& a, const Point& b, const Point& c) {
  const Point ab = sub(b, a), ac = sub(c, a), ap = sub(p, a);
  const double d1 = dot(ab, ap), d2 = dot(ac, ap);
  if (d1 <= 0.0 && d2 <= 0.0) return {a, 0};
  const Point bp = sub(p, b);
  const double d3 = dot(ab, bp), d4 = dot(ac, bp);
  if (d3 >= 0.0 && d4 <= d3) return {b, 1};
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0) return {add(a, scale(ab, d1 / (d1 - d3))), 3};
  const Point cp = sub(p, c);
  const double d5 = dot(ab, cp), d6 = dot(ac, cp);
  if (d6 >= 0.0 && d5 <= d6) return {c, 2};
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0) return {add(a, scale(ac, d2 / (d2 - d6))), 5};
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0) {
    const double w = (d4 - d3) / ((d4 - d3) + (d5 - d6));
    return {add(b, scale(sub(c, b), w)), 4};
  }
  const double denom = 1.0 / (va + vb + vc);
  return {add(a, add(scale(ab, vb * denom), scale(ac, vc * denom))), 6};
}

using EdgeKey = std::pair<int, int>;
EdgeKey edge_key(int a, int b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

// Outward pseudo-normals of every element, vertex and (3D) edge.
struct PseudoNormals {
  std::vector<Point> element;
  std::vector<Point> vertex;
  std::map<EdgeKey, Point> edge;
};

void require_closed(const Contour& c) {
  if (c.dim == 2) {
    std::vector<int> in(c.vertices.size(), 0), out(c.vertices.size(), 0);
    for (const auto& s : c.segments) {
      ++out[s[0]];
      ++in[s[1]];
    }
    for (std::size_t v = 0; v < c.vertices.size(); ++v)
      if (in[v] != 1 || out[v] != 1) throw Error(ErrorKind::OpenContour, "contour is not closed");
  } else {
    std::map<EdgeKey, int> count;
    for (const auto& t : c.triangles)
      for (int e = 0; e < 3; ++e) ++count[edge_key(t[e], t[(e + 1) % 3])];
    for (const auto& [key, n] : count)
      if (n != 2) throw Error(ErrorKind::OpenContour, "mesh edge not shared by two triangles");
  }
}

PseudoNormals pseudo_normals(const Contour& c) {
  PseudoNormals pn;
  pn.vertex.assign(c.vertices.size(), Point{});
  if (c.dim == 2) {
    for (const auto& s : c.segments) {
      const Point d = sub(c.vertices[s[1]], c.vertices[s[0]]);
      const Point n = unit(Point{d[1], -d[0], 0.0});
      pn.element.push_back(n);
      for (int v : s) pn.vertex[v] = add(pn.vertex[v], n);
    }
  } else {
    for (const auto& t : c.triangles) {
      const Point n = unit(cross(sub(c.vertices[t[1]], c.vertices[t[0]]),
                                 sub(c.vertices[t[2]], c.vertices[t[0]])));
      pn.element.push_back(n);
      for (int e = 0; e < 3; ++e) {
        const int v = t[e];
        const Point u = unit(sub(c.vertices[t[(e + 1) % 3]], c.vertices[v]));
        const Point w = unit(sub(c.vertices[t[(e + 2) % 3]], c.vertices[v]));
        const double angle = std::acos(std::clamp(dot(u, w), -1.0, 1.0));
        pn.vertex[v] = add(pn.vertex[v], scale(n, angle));
        auto& en = pn.edge[edge_key(t[e], t[(e + 1) % 3])];
        en = add(en, n);
      }
    }
  }
  return pn;
}

struct Hit {
  double distance = kInf;
  Point point{};
  int element = -1;
  int feature = 0;
};

Hit element_hit(const Contour& c, int e, const Point& x) {
  Closest cl;
  if (c.dim == 2) {
    const auto& s = c.segments[e];
    cl = closest_on_segment(x, c.vertices[s[0]], c.vertices[s[1]]);
  } else {
    const auto& t = c.triangles[e];
    cl = closest_on_triangle(x, c.vertices[t[0]], c.vertices[t[1]], c.vertices[t[2]]);
  }
  return {norm(sub(x, cl.point)), cl.point, e, cl.feature};
}

double hit_sign(const Contour& c, const PseudoNormals& pn, const Hit& hit, const Point& x) {
  Point n;
  if (c.dim == 2) {
    const auto& s = c.segments[hit.element];
    n = hit.feature == 6 ? pn.element[hit.element] : pn.vertex[s[hit.feature]];
  } else {
    const auto& t = c.triangles[hit.element];
    if (hit.feature < 3) {
      n = pn.vertex[t[hit.feature]];
    } else if (hit.feature < 6) {
      const int e = hit.feature - 3;
      n = pn.edge.at(edge_key(t[e], t[(e + 1) % 3]));
    } else {
      n = pn.element[hit.element];
    }
  }
  return dot(n, sub(x, hit.point)) > 0.0 ? -1.0 : 1.0;
}

std::pair<Point, Point> element_bounds(const Contour& c, int e) {
  Point lo{kInf, kInf, kInf}, hi{-kInf, -kInf, -kInf};
  auto grow = [&](int v) {
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::min(lo[a], c.vertices[v][a]);
      hi[a] = std::max(hi[a], c.vertices[v][a]);
    }
  };
  if (c.dim == 2) {
    for (int v : c.segments[e]) grow(v);
  } else {
    for (int v : c.triangles[e]) grow(v);
  }
  return {lo, hi};
}

// Cubic buckets of side `cell` over the box, each listing the elements whose
// bounding box, grown by `reach`, overlaps it.
class Buckets {
 public:
  Buckets(const Contour& c, const GridSpec& g, double cell, double reach)
      : dim_(g.dim), cell_(cell) {
    per_axis_ = std::max(1, static_cast<int>(std::ceil(g.extent / cell)));
    const std::size_t total = dim_ == 2 ? per_axis_ * per_axis_
                                        : static_cast<std::size_t>(per_axis_) * per_axis_ * per_axis_;
    lists_.resize(total);
    const int count = static_cast<int>(c.element_count());
    for (int e = 0; e < count; ++e) {
      auto [lo, hi] = element_bounds(c, e);
      std::array<int, 3> a{0, 0, 0}, b{0, 0, 0};
      for (int d = 0; d < dim_; ++d) {
        a[d] = clamp_bin(lo[d] - reach);
        b[d] = clamp_bin(hi[d] + reach);
      }
      for (int i = a[0]; i <= b[0]; ++i)
        for (int j = a[1]; j <= b[1]; ++j)
          for (int k = a[2]; k <= b[2]; ++k) lists_[flat(i, j, k)].push_back(e);
    }
  }

  const std::vector<int>& at(const Point& x) const {
    return lists_[flat(clamp_bin(x[0]), clamp_bin(x[1]), dim_ == 3 ? clamp_bin(x[2]) : 0)];
  }

 private:
  int clamp_bin(double v) const {
    return std::clamp(static_cast<int>(std::floor(v / cell_)), 0, per_axis_ - 1);
  }
  std::size_t flat(int i, int j, int k) const {
    return dim_ == 2 ? static_cast<std::size_t>(i) * per_axis_ + j
                     : (static_cast<std::size_t>(i) * per_axis_ + j) * per_axis_ + k;
  }
  int dim_;
  double cell_;
  int per_axis_ = 1;
  std::vector<std::vector<int>> lists_;
};

// Cells outside the band inherit the sign of the band cells around them.
void flood_signs(const GridSpec& g, std::vector<signed char>& sign) {
  std::deque<std::size_t> queue;
  for (std::size_t i = 0; i < sign.size(); ++i)
    if (sign[i] != 0) queue.push_back(i);
  const int n = g.cells;
  while (!queue.empty()) {
    const std::size_t idx = queue.front();
    queue.pop_front();
    const auto c = g.coords(idx);
    for (int a = 0; a < g.dim; ++a)
      for (int step : {-1, 1}) {
        auto nb = c;
        nb[a] = (nb[a] + step + n) % n;
        const std::size_t j = g.index(nb[0], nb[1], nb[2]);
        if (sign[j] == 0) {
          sign[j] = sign[idx];
          queue.push_back(j);
        }
      }
  }
}

template <class Candidates>
SignedDistanceField build_sdf(const Contour& contour, const GridSpec& grid, double band,
                              Candidates&& candidates) {
  grid.validate();
  if (band < 2.0 * grid.spacing())
    throw Error(ErrorKind::InvalidArgument, "band must cover at least two cells");
  SignedDistanceField sdf;
  sdf.band = band;
  sdf.r = ScalarField(grid, -band);
  sdf.nearest.assign(grid.size(), Point{});
  sdf.element.assign(grid.size(), -1);
  if (contour.empty()) return sdf;
  require_closed(contour);
  const PseudoNormals pn = pseudo_normals(contour);
  std::vector<signed char> sign(grid.size(), 0);
  const auto total = static_cast<std::ptrdiff_t>(grid.size());
#pragma omp parallel for schedule(dynamic, 256)
  for (std::ptrdiff_t idx = 0; idx < total; ++idx) {
    const Point x = grid.center(idx);
    Hit best;
    for (int e : candidates(x)) {
      const Hit h = element_hit(contour, e, x);
      if (h.distance < best.distance) best = h;
    }
    if (best.element < 0 || best.distance >= band) continue;
    const double s = hit_sign(contour, pn, best, x);
    sign[idx] = static_cast<signed char>(s);
    sdf.r.values[idx] = s * best.distance;
    sdf.nearest[idx] = best.point;
    sdf.element[idx] = best.element;
  }
  flood_signs(grid, sign);
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (sdf.element[i] < 0) sdf.r.values[i] = sign[i] > 0 ? band : -band;
  return sdf;
}

}  // namespace

CurvatureSample make_sample(std::vector<double> kappas) {
  CurvatureSample s;
  double sq = 0.0;
  for (double k : kappas) {
    sq += k * k;
    s.mean_sum += k;
  }
  s.weingarten_norm = std::sqrt(sq);
  s.kappas = std::move(kappas);
  return s;
}

SignedDistanceField signed_distance(const Contour& contour, const GridSpec& grid, double band) {
  if (contour.empty()) return build_sdf(contour, grid, band, [](const Point&) {
    return std::vector<int>{};
  });
  const Buckets buckets(contour, grid, band, band);
  return build_sdf(contour, grid, band,
                   [&](const Point& x) -> const std::vector<int>& { return buckets.at(x); });
}

SignedDistanceField signed_distance_brute_force(const Contour& contour, const GridSpec& grid,
                                                double band) {
  std::vector<int> all(contour.element_count());
  std::iota(all.begin(), all.end(), 0);
  return build_sdf(contour, grid, band,
                   [&](const Point&) -> const std::vector<int>& { return all; });
}

double distance_to_contour(const Contour& contour, const Point& p, Point* closest) {
  Hit best;
  const int count = static_cast<int>(contour.element_count());
  for (int e = 0; e < count; ++e) {
    const Hit h = element_hit(contour, e, p);
    if (h.distance < best.distance) best = h;
  }
  if (closest) *closest = best.point;
  return best.distance;
}

std::vector<Point> resample(const Contour& c, double spacing) {
  if (!(spacing > 0.0)) throw Error(ErrorKind::InvalidArgument, "resample spacing must be > 0");
  std::vector<Point> out;
  if (c.dim == 2) {
    for (const auto& s : c.segments) {
      const Point a = c.vertices[s[0]], d = sub(c.vertices[s[1]], a);
      const int n = std::max(1, static_cast<int>(std::ceil(norm(d) / spacing)));
      for (int k = 0; k < n; ++k) out.push_back(add(a, scale(d, static_cast<double>(k) / n)));
    }
  } else {
    for (const auto& t : c.triangles) {
      const Point a = c.vertices[t[0]], u = sub(c.vertices[t[1]], a), w = sub(c.vertices[t[2]], a);
      const double longest = std::max({norm(u), norm(w), norm(sub(u, w))});
      const int n = std::max(1, static_cast<int>(std::ceil(longest / spacing)));
      for (int i = 0; i <= n; ++i)
        for (int j = 0; i + j <= n; ++j)
          out.push_back(add(a, add(scale(u, static_cast<double>(i) / n),
                                   scale(w, static_cast<double>(j) / n))));
    }
  }
  return out;
}

namespace {

double directed(std::span<const Point> a, std::span<const Point> b) {
  double worst = 0.0;
  const auto n = static_cast<std::ptrdiff_t>(a.size());
#pragma omp parallel for reduction(max : worst) schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    double best = kInf;
    for (const Point& q : b) {
      const Point d = sub(a[i], q);
      best = std::min(best, dot(d, d));
    }
    worst = std::max(worst, best);
  }
  return std::sqrt(worst);
}

double directed(std::span<const Point> samples, const Contour& target) {
  double worst = 0.0;
  const auto n = static_cast<std::ptrdiff_t>(samples.size());
#pragma omp parallel for reduction(max : worst) schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    worst = std::max(worst, distance_to_contour(target, samples[i]));
  return worst;
}

}  // namespace

double hausdorff(std::span<const Point> a, std::span<const Point> b) {
  if (a.empty() || b.empty()) throw Error(ErrorKind::EmptySet, "hausdorff of an empty set");
  return std::max(directed(a, b), directed(b, a));
}

double hausdorff(const Contour& a, const Contour& b, double spacing) {
  if (a.empty() || b.empty()) throw Error(ErrorKind::EmptySet, "hausdorff of an empty contour");
  const auto sa = resample(a, spacing);
  const auto sb = resample(b, spacing);
  return std::max(directed(sa, b), directed(sb, a));
}

namespace {

struct Derivatives {
  double g[3];
  double hess[3][3];
};

Derivatives centered(const ScalarField& u, std::size_t idx) {
  const GridSpec& grid = u.grid;
  const int n = grid.cells;
  const double dx = grid.spacing();
  const auto c = grid.coords(idx);
  auto at = [&](int da, int oa, int db, int ob) {
    auto p = c;
    p[da] = (p[da] + oa + n) % n;
    p[db] = (p[db] + ob + n) % n;
    return u.values[grid.index(p[0], p[1], p[2])];
  };
  Derivatives d{};
  const double center = u.values[idx];
  for (int a = 0; a < grid.dim; ++a) {
    d.g[a] = (at(a, 1, a, 0) - at(a, -1, a, 0)) / (2.0 * dx);
    d.hess[a][a] = (at(a, 1, a, 0) - 2.0 * center + at(a, -1, a, 0)) / (dx * dx);
    for (int b = a + 1; b < grid.dim; ++b) {
      d.hess[a][b] = d.hess[b][a] =
          (at(a, 1, b, 1) - at(a, 1, b, -1) - at(a, -1, b, 1) + at(a, -1, b, -1)) / (4.0 * dx * dx);
    }
  }
  return d;
}

template <class Eval>
FieldCurvature field_quantity(const ScalarField& u, double min_gradient, Eval&& eval) {
  FieldCurvature out{ScalarField(u.grid), std::vector<std::uint8_t>(u.grid.size(), 0)};
  const int dim = u.grid.dim;
  const auto total = static_cast<std::ptrdiff_t>(u.grid.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t idx = 0; idx < total; ++idx) {
    const Derivatives d = centered(u, idx);
    double g2 = 0.0;
    for (int a = 0; a < dim; ++a) g2 += d.g[a] * d.g[a];
    const double gn = std::sqrt(g2);
    if (!(gn > min_gradient)) {
      out.masked[idx] = 1;
      continue;
    }
    out.value.values[idx] = eval(d, gn, dim);
  }
  return out;
}

}  // namespace

FieldCurvature curvature_from_field(const ScalarField& u, double min_gradient) {
  return field_quantity(u, min_gradient, [](const Derivatives& d, double gn, int dim) {
    double lap = 0.0, quad = 0.0;
    for (int a = 0; a < dim; ++a) {
      lap += d.hess[a][a];
      for (int b = 0; b < dim; ++b) quad += d.g[a] * d.hess[a][b] * d.g[b];
    }
    return -(gn * gn * lap - quad) / (gn * gn * gn);
  });
}

FieldCurvature weingarten_norm_from_field(const ScalarField& u, double min_gradient) {
  return field_quantity(u, min_gradient, [](const Derivatives& d, double gn, int dim) {
    Eigen::Matrix3d hess = Eigen::Matrix3d::Zero();
    Eigen::Vector3d n = Eigen::Vector3d::Zero();
    for (int a = 0; a < dim; ++a) {
      n[a] = d.g[a] / gn;
      for (int b = 0; b < dim; ++b) hess(a, b) = d.hess[a][b];
    }
    Eigen::Matrix3d proj = Eigen::Matrix3d::Zero();
    proj.topLeftCorner(dim, dim).setIdentity();
    proj -= n * n.transpose();
    return (proj * hess * proj).norm() / gn;
  });
}

double interpolate(const ScalarField& f, const Point& x) {
  const GridSpec& g = f.grid;
  const int n = g.cells;
  const double dx = g.spacing();
  int base[3] = {0, 0, 0};
  double frac[3] = {0.0, 0.0, 0.0};
  for (int a = 0; a < g.dim; ++a) {
    const double s = x[a] / dx - 0.5;
    const double fl = std::floor(s);
    base[a] = static_cast<int>(fl);
    frac[a] = s - fl;
  }
  const int corners = 1 << g.dim;
  double value = 0.0;
  for (int m = 0; m < corners; ++m) {
    int idx[3] = {0, 0, 0};
    double w = 1.0;
    for (int a = 0; a < g.dim; ++a) {
      const int bit = (m >> a) & 1;
      idx[a] = ((base[a] + bit) % n + n) % n;
      w *= bit ? frac[a] : 1.0 - frac[a];
    }
    value += w * f.values[g.index(idx[0], idx[1], idx[2])];
  }
  return value;
}

std::vector<double> sample_at_vertices(const ScalarField& field, const Contour& contour) {
  std::vector<double> out(contour.vertices.size());
  for (std::size_t v = 0; v < out.size(); ++v) out[v] = interpolate(field, contour.vertices[v]);
  return out;
}

Eigen::MatrixXd weingarten_graph(const Eigen::VectorXd& grad, const Eigen::MatrixXd& hess) {
  const double w2 = 1.0 + grad.squaredNorm();
  const Eigen::MatrixXd proj =
      Eigen::MatrixXd::Identity(grad.size(), grad.size()) - grad * grad.transpose() / w2;
  return proj * hess / std::sqrt(w2);
}

double mean_curvature_graph(const Eigen::VectorXd& grad, const Eigen::MatrixXd& hess) {
  const double w = std::sqrt(1.0 + grad.squaredNorm());
  return hess.trace() / w - grad.dot(hess * grad) / (w * w * w);
}

namespace {

void require_off_focal(double r, std::span<const double> kappas) {
  for (double k : kappas)
    if (std::abs(r * k) >= 1.0)
      throw Error(ErrorKind::FocalCrossing, "offset reaches a focal point (|r kappa| >= 1)");
}

}  // namespace

CurvatureSample offset_curvatures(std::span<const double> kappas, double r0) {
  require_off_focal(r0, kappas);
  std::vector<double> out(kappas.size());
  for (std::size_t i = 0; i < kappas.size(); ++i) out[i] = kappas[i] / (1.0 - r0 * kappas[i]);
  return make_sample(std::move(out));
}

double psi(double r, std::span<const double> kappas) {
  require_off_focal(r, kappas);
  double s = 0.0;
  for (double k : kappas) s += k * k / (1.0 - r * k);
  return s;
}

namespace {

std::vector<std::vector<std::pair<int, double>>> edge_graph(const Contour& c) {
  std::vector<std::vector<std::pair<int, double>>> adj(c.vertices.size());
  auto link = [&](int a, int b) {
    const double w = norm(sub(c.vertices[a], c.vertices[b]));
    adj[a].push_back({b, w});
    adj[b].push_back({a, w});
  };
  if (c.dim == 2) {
    for (const auto& s : c.segments) link(s[0], s[1]);
  } else {
    std::map<EdgeKey, bool> seen;
    for (const auto& t : c.triangles)
      for (int e = 0; e < 3; ++e) {
        const auto key = edge_key(t[e], t[(e + 1) % 3]);
        if (!seen.emplace(key, true).second) continue;
        link(key.first, key.second);
      }
  }
  return adj;
}

std::vector<int> element_vertices(const Contour& c, int e) {
  if (c.dim == 2) return {c.segments[e][0], c.segments[e][1]};
  return {c.triangles[e][0], c.triangles[e][1], c.triangles[e][2]};
}

std::vector<double> dijkstra(const std::vector<std::vector<std::pair<int, double>>>& adj,
                             const std::vector<std::pair<int, double>>& seeds) {
  std::vector<double> dist(adj.size(), kInf);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  for (auto [v, d] : seeds)
    if (d < dist[v]) {
      dist[v] = d;
      pq.push({d, v});
    }
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (d > dist[v]) continue;
    for (auto [w, len] : adj[v])
      if (d + len < dist[w]) {
        dist[w] = d + len;
        pq.push({dist[w], w});
      }
  }
  return dist;
}

int locate(const Contour& c, const Point& p, double tolerance) {
  Hit best;
  const int count = static_cast<int>(c.element_count());
  for (int e = 0; e < count; ++e) {
    const Hit h = element_hit(c, e, p);
    if (h.distance < best.distance) best = h;
  }
  if (best.element < 0 || best.distance > tolerance)
    throw Error(ErrorKind::NotOnContour, "point does not lie on the contour");
  return best.element;
}

}  // namespace

double intrinsic_distance(const Contour& contour, const Point& p, const Point& q,
                          double tolerance) {
  if (contour.empty()) throw Error(ErrorKind::EmptySet, "empty contour");
  const int ep = locate(contour, p, tolerance);
  const int eq = locate(contour, q, tolerance);
  const auto vp = element_vertices(contour, ep);
  const auto vq = element_vertices(contour, eq);
  double best = kInf;
  if (ep == eq) best = norm(sub(p, q));
  std::vector<std::pair<int, double>> seeds;
  for (int v : vp) seeds.push_back({v, norm(sub(contour.vertices[v], p))});
  const auto dist = dijkstra(edge_graph(contour), seeds);
  for (int v : vq) best = std::min(best, dist[v] + norm(sub(contour.vertices[v], q)));
  return best;
}

namespace {

double orient(const Point& a, const Point& b, const Point& c) {
  return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
}

bool on_segment(const Point& a, const Point& b, const Point& p) {
  return std::min(a[0], b[0]) <= p[0] && p[0] <= std::max(a[0], b[0]) &&
         std::min(a[1], b[1]) <= p[1] && p[1] <= std::max(a[1], b[1]);
}

bool segments_cross(const Point& a, const Point& b, const Point& c, const Point& d) {
  const double o1 = orient(a, b, c), o2 = orient(a, b, d);
  const double o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) && ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0)))
    return true;
  if (o1 == 0 && on_segment(a, b, c)) return true;
  if (o2 == 0 && on_segment(a, b, d)) return true;
  if (o3 == 0 && on_segment(c, d, a)) return true;
  if (o4 == 0 && on_segment(c, d, b)) return true;
  return false;
}

// Arc-length position of each vertex along its loop, and each loop's length.
struct LoopArc {
  std::vector<double> s;
  std::vector<double> length;  // indexed by loop id
  std::vector<int> next;
};

LoopArc loop_arcs(const Contour& c) {
  LoopArc arc;
  const std::size_t nv = c.vertices.size();
  arc.s.assign(nv, -1.0);
  arc.next.assign(nv, -1);
  for (const auto& s : c.segments) arc.next[s[0]] = s[1];
  const int loops = c.loop_count();
  arc.length.assign(loops, 0.0);
  for (std::size_t v0 = 0; v0 < nv; ++v0) {
    if (arc.s[v0] >= 0.0) continue;
    double s = 0.0;
    int v = static_cast<int>(v0);
    do {
      arc.s[v] = s;
      const int w = arc.next[v];
      s += norm(sub(c.vertices[w], c.vertices[v]));
      v = w;
    } while (v != static_cast<int>(v0));
    arc.length[c.loop_id[v0]] = s;
  }
  return arc;
}

// Point at arc length `target` ahead of vertex p along its loop.
Point walk(const Contour& c, const LoopArc& arc, int p, double target) {
  int v = p;
  double travelled = 0.0;
  for (;;) {
    const int w = arc.next[v];
    const double len = norm(sub(c.vertices[w], c.vertices[v]));
    if (travelled + len >= target) {
      const double t = len > 0.0 ? (target - travelled) / len : 0.0;
      return add(c.vertices[v], scale(sub(c.vertices[w], c.vertices[v]), t));
    }
    travelled += len;
    v = w;
  }
}

double median_edge(const Contour& c) {
  std::vector<double> len;
  if (c.dim == 2) {
    for (const auto& s : c.segments) len.push_back(norm(sub(c.vertices[s[1]], c.vertices[s[0]])));
  } else {
    for (const auto& t : c.triangles)
      for (int e = 0; e < 3; ++e)
        len.push_back(norm(sub(c.vertices[t[(e + 1) % 3]], c.vertices[t[e]])));
  }
  if (len.empty()) return 0.0;
  std::nth_element(len.begin(), len.begin() + len.size() / 2, len.end());
  return len[len.size() / 2];
}

double pair_minimum_2d(const Contour& c, double r_star) {
  const LoopArc arc = loop_arcs(c);
  const int nv = static_cast<int>(c.vertices.size());
  double m = kInf;
#pragma omp parallel for reduction(min : m) schedule(dynamic, 16)
  for (int p = 0; p < nv; ++p) {
    const int lp = c.loop_id[p];
    const double total = arc.length[lp];
    for (int q = 0; q < nv; ++q) {
      if (q == p) continue;
      if (c.loop_id[q] == lp) {
        const double ds = std::abs(arc.s[q] - arc.s[p]);
        if (std::min(ds, total - ds) < r_star) continue;
      }
      m = std::min(m, norm(sub(c.vertices[q], c.vertices[p])));
    }
    // The pair at arc length exactly r★, which the vertex lattice misses.
    if (total >= 2.0 * r_star) {
      m = std::min(m, norm(sub(walk(c, arc, p, r_star), c.vertices[p])));
      m = std::min(m, norm(sub(walk(c, arc, p, total - r_star), c.vertices[p])));
    }
  }
  return m;
}

double pair_minimum_3d(const Contour& c, double r_star) {
  const auto adj = edge_graph(c);
  const int nv = static_cast<int>(c.vertices.size());
  double m = kInf;
#pragma omp parallel for reduction(min : m) schedule(dynamic, 4)
  for (int p = 0; p < nv; ++p) {
    const auto dist = dijkstra(adj, {{p, 0.0}});
    for (int q = 0; q < nv; ++q)
      if (q != p && dist[q] >= r_star) m = std::min(m, norm(sub(c.vertices[q], c.vertices[p])));
  }
  return m;
}

}  // namespace

bool self_intersects(const Contour& c) {
  if (c.dim != 2) return false;
  const int ns = static_cast<int>(c.segments.size());
  bool found = false;
#pragma omp parallel for reduction(|| : found) schedule(dynamic, 16)
  for (int i = 0; i < ns; ++i) {
    const auto& s = c.segments[i];
    for (int j = i + 1; j < ns; ++j) {
      const auto& t = c.segments[j];
      if (s[0] == t[0] || s[0] == t[1] || s[1] == t[0] || s[1] == t[1]) continue;
      if (segments_cross(c.vertices[s[0]], c.vertices[s[1]], c.vertices[t[0]], c.vertices[t[1]]))
        found = true;
    }
  }
  return found;
}

ArcFit arc_fit(const Contour& contour, double window) {
  if (contour.dim != 2) throw Error(ErrorKind::InvalidArgument, "arc_fit is 2D only");
  if (!(window > 0.0)) throw Error(ErrorKind::InvalidArgument, "window must be positive");
  const int nv = static_cast<int>(contour.vertices.size());
  std::vector<int> next(nv, -1), prev(nv, -1);
  for (const auto& s : contour.segments) {
    next[s[0]] = s[1];
    prev[s[1]] = s[0];
  }
  for (int i = 0; i < nv; ++i)
    if (next[i] < 0 || prev[i] < 0) throw Error(ErrorKind::OpenContour, "open contour");
  ArcFit out;
  out.kappa.assign(nv, 0.0);
  out.normals.assign(nv, Point{});
#pragma omp parallel for schedule(static)
  for (int i = 0; i < nv; ++i) {
    const Point& x = contour.vertices[i];
    std::vector<int> idx{i};
    // walk both ways until half the window is used up
    auto walk = [&](const std::vector<int>& step) {
      double arc = 0.0;
      int j = i;
      for (;;) {
        const int k = step[j];
        arc += norm(sub(contour.vertices[k], contour.vertices[j]));
        if (arc > 0.5 * window || k == i) break;
        idx.push_back(k);
        j = k;
      }
      return j;
    };
    const int fwd = walk(next), back = walk(prev);
    Point t = sub(contour.vertices[fwd], contour.vertices[back]);
    if (fwd == back) t = sub(contour.vertices[next[i]], contour.vertices[prev[i]]);
    t = scale(t, 1.0 / norm(t));
    const Point n{t[1], -t[0], 0.0};
    if (idx.size() < 3) {
      out.normals[i] = n;
      continue;
    }
    Eigen::MatrixXd a(idx.size(), 3);
    Eigen::VectorXd v(idx.size());
    for (std::size_t q = 0; q < idx.size(); ++q) {
      const Point d = sub(contour.vertices[idx[q]], x);
      const double u = dot(d, t);
      a.row(q) << 1.0, u, u * u;
      v(q) = dot(d, n);
    }
    const Eigen::Vector3d c = a.colPivHouseholderQr().solve(v);
    const double slope = c(1);
    out.kappa[i] = -2.0 * c(2) / std::pow(1.0 + slope * slope, 1.5);
    const Point nn = sub(n, scale(t, slope));
    out.normals[i] = scale(nn, 1.0 / norm(nn));
  }
  return out;
}

BallRadius ball_radius(const Contour& contour, double c_star, double c0, double min_chord) {
  if (contour.empty()) throw Error(ErrorKind::EmptySet, "empty contour");
  BallRadius out;
  if (self_intersects(contour)) {
    out.self_intersecting = true;
    return out;
  }
  if (min_chord <= 0.0) min_chord = 3.0 * median_edge(contour);
  const int nv = static_cast<int>(contour.vertices.size());
  const auto normals = static_cast<int>(contour.normals.size()) == nv
                           ? contour.normals
                           : element_vertex_normals(contour);
  double interior = kInf, exterior = kInf;
#pragma omp parallel for reduction(min : interior, exterior) schedule(dynamic, 16)
  for (int p = 0; p < nv; ++p) {
    const Point& x = contour.vertices[p];
    for (int q = 0; q < nv; ++q) {
      const Point d = sub(contour.vertices[q], x);
      const double d2 = dot(d, d);
      if (d2 < min_chord * min_chord) continue;
      const double along = dot(normals[p], d);
      if (along < 0.0) interior = std::min(interior, d2 / (-2.0 * along));
      else if (along > 0.0) exterior = std::min(exterior, d2 / (2.0 * along));
    }
  }
  out.interior = interior;
  out.exterior = exterior;
  out.radius = std::min(interior, exterior);
  if (c0 <= 0.0) c0 = 1.0 / out.radius;
  out.r_star = c_star / c0;
  out.m = contour.dim == 2 ? pair_minimum_2d(contour, out.r_star)
                           : pair_minimum_3d(contour, out.r_star);
  return out;
}

}  // namespace mbo::geometry

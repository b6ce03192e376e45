#include "mbo/contour.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <unordered_map>

namespace mbo {

namespace {

constexpr double kEdgeClamp = 1e-9;

Point lerp(const Point& a, const Point& b, double t) {
  return {a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1]), a[2] + t * (b[2] - a[2])};
}

Point sub(const Point& a, const Point& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
Point cross(const Point& a, const Point& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
double dot(const Point& a, const Point& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
double norm(const Point& a) { return std::sqrt(dot(a, a)); }

// Crossing parameter measured from `origin` toward `other`.
double crossing(double v_origin, double v_other, double level) {
  const double t = (level - v_origin) / (v_other - v_origin);
  return std::clamp(t, kEdgeClamp, 1.0 - kEdgeClamp);
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

void check_level(const ScalarField& field, double level) {
  const double lo = field.min(), hi = field.max();
  if (!(level >= lo && level <= hi))
    throw Error(ErrorKind::Precondition, "contour level outside the field range");
}

void check_boundary(const ScalarField& field, double level) {
  const GridSpec& g = field.grid;
  const int last = g.cells - 1;
  for (std::size_t idx = 0; idx < field.values.size(); ++idx) {
    const auto c = g.coords(idx);
    bool on_ring = false;
    for (int a = 0; a < g.dim; ++a) on_ring |= (c[a] == 0 || c[a] == last);
    if (on_ring && field.values[idx] > level)
      throw Error(ErrorKind::BoundaryTouch, "level set reaches the box boundary");
  }
}

// Corner order is counter-clockwise in the (axis 0, axis 1) plane.
constexpr int kSquareCorner[4][2] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};

template <class Emit>
void march_square(const double v[4], double level, Emit&& emit) {
  bool in[4];
  int mask = 0;
  for (int c = 0; c < 4; ++c) {
    in[c] = v[c] > level;
    mask |= in[c] << c;
  }
  if (mask == 0 || mask == 15) return;
  // Crossing on edge e (corner e -> corner e+1 in CCW order).
  int starts[2], ns = 0;
  bool crossed[4] = {};
  for (int e = 0; e < 4; ++e) {
    const int a = e, b = (e + 1) % 4;
    if (in[a] == in[b]) continue;
    crossed[e] = true;
    if (in[a]) starts[ns++] = e;
  }
  const auto next_crossing = [&](int e, int step) {
    for (int k = 1; k <= 4; ++k) {
      const int f = ((e + step * k) % 4 + 4) % 4;
      if (crossed[f]) return f;
    }
    return e;
  };
  int step = 1;
  if (ns == 2) {
    const double center = 0.25 * (v[0] + v[1] + v[2] + v[3]);
    step = center > level ? 1 : -1;
  }
  for (int s = 0; s < ns; ++s) {
    const int e = starts[s];
    emit(e, next_crossing(e, step));
  }
}

// Kuhn split of the unit cube into 6 tetrahedra sharing the main diagonal.
constexpr int kKuhn[6][4] = {{0, 1, 3, 7}, {0, 1, 5, 7}, {0, 2, 3, 7},
                             {0, 2, 6, 7}, {0, 4, 5, 7}, {0, 4, 6, 7}};

struct TetVertex {
  int a, b;  // corner ids, a inside
};

template <class Emit>
void march_tet(const double v[4], const Point p[4], double level, Emit&& emit) {
  int inside[4], outside[4], ni = 0, no = 0;
  for (int c = 0; c < 4; ++c) (v[c] > level ? inside[ni++] : outside[no++]) = c;
  if (ni == 0 || ni == 4) return;
  Point cin{}, cout{};
  for (int k = 0; k < ni; ++k)
    for (int d = 0; d < 3; ++d) cin[d] += p[inside[k]][d] / ni;
  for (int k = 0; k < no; ++k)
    for (int d = 0; d < 3; ++d) cout[d] += p[outside[k]][d] / no;
  const Point outward = sub(cout, cin);
  if (ni == 1 || ni == 3) {
    TetVertex tri[3];
    if (ni == 1) {
      for (int k = 0; k < 3; ++k) tri[k] = {inside[0], outside[k]};
    } else {
      for (int k = 0; k < 3; ++k) tri[k] = {inside[k], outside[0]};
    }
    emit(tri, outward);
  } else {
    const int A = inside[0], B = inside[1], C = outside[0], D = outside[1];
    TetVertex t1[3] = {{A, C}, {A, D}, {B, D}};
    TetVertex t2[3] = {{A, C}, {B, D}, {B, C}};
    emit(t1, outward);
    emit(t2, outward);
  }
}

Point corner_point(const GridSpec& g, int i, int j, int k) {
  const double h = g.spacing();
  return {(i + 0.5) * h, (j + 0.5) * h, g.dim == 3 ? (k + 0.5) * h : 0.0};
}

void order_loops_2d(Contour& c) {
  const std::size_t nv = c.vertices.size();
  std::vector<int> next(nv, -1);
  for (const auto& s : c.segments) next[s[0]] = s[1];
  std::vector<int> order;
  std::vector<int> loop;
  std::vector<char> seen(nv, 0);
  order.reserve(nv);
  int loops = 0;
  for (std::size_t v0 = 0; v0 < nv; ++v0) {
    if (seen[v0]) continue;
    int v = static_cast<int>(v0);
    while (!seen[v]) {
      seen[v] = 1;
      order.push_back(v);
      loop.push_back(loops);
      v = next[v];
      if (v < 0) throw Error(ErrorKind::OpenContour, "marching produced an open polyline");
    }
    ++loops;
  }
  std::vector<Point> verts(nv);
  for (std::size_t k = 0; k < nv; ++k) verts[k] = c.vertices[order[k]];
  c.vertices = std::move(verts);
  c.loop_id = loop;
  c.segments.clear();
  // Consecutive vertices of a loop are joined; the last closes back to the first.
  std::size_t k = 0;
  while (k < nv) {
    std::size_t e = k;
    while (e + 1 < nv && loop[e + 1] == loop[k]) ++e;
    for (std::size_t m = k; m <= e; ++m)
      c.segments.push_back({static_cast<int>(m), static_cast<int>(m == e ? k : m + 1)});
    k = e + 1;
  }
}

Contour extract_2d(const ScalarField& f, double level) {
  const GridSpec& g = f.grid;
  const int n = g.cells;
  Contour c;
  c.dim = 2;
  std::vector<int> vid(static_cast<std::size_t>(n) * n * 2, -1);
  auto vertex = [&](int i, int j, int dir, double t) {
    const std::size_t key = (static_cast<std::size_t>(i) * n + j) * 2 + dir;
    if (vid[key] < 0) {
      const Point a = corner_point(g, i, j, 0);
      const Point b = corner_point(g, i + (dir == 0), j + (dir == 1), 0);
      vid[key] = static_cast<int>(c.vertices.size());
      c.vertices.push_back(lerp(a, b, t));
    }
    return vid[key];
  };
  for (int i = 0; i + 1 < n; ++i) {
    for (int j = 0; j + 1 < n; ++j) {
      double v[4];
      Point p[4];
      for (int q = 0; q < 4; ++q) {
        const int ci = i + kSquareCorner[q][0], cj = j + kSquareCorner[q][1];
        v[q] = f.values[g.index(ci, cj)];
        p[q] = corner_point(g, ci, cj, 0);
      }
      // Edge e joins corner e and e+1; map to the lattice edge and its origin.
      auto edge_vertex = [&](int e) {
        static constexpr int origin[4] = {0, 1, 3, 0};
        static constexpr int dir[4] = {0, 1, 0, 1};
        static constexpr int other[4] = {1, 2, 2, 3};
        const int o = origin[e], x = other[e];
        const double t = crossing(v[o], v[x], level);
        return vertex(i + kSquareCorner[o][0], j + kSquareCorner[o][1], dir[e], t);
      };
      march_square(v, level, [&](int es, int ee) {
        c.segments.push_back({edge_vertex(es), edge_vertex(ee)});
      });
    }
  }
  order_loops_2d(c);
  return c;
}

Contour extract_3d(const ScalarField& f, double level) {
  const GridSpec& g = f.grid;
  const int n = g.cells;
  Contour c;
  c.dim = 3;
  std::unordered_map<std::uint64_t, int> vid;
  auto vertex = [&](const std::array<int, 3>& lo, int diff, double t) {
    const std::uint64_t key = static_cast<std::uint64_t>(g.index(lo[0], lo[1], lo[2])) * 8 + diff;
    auto it = vid.find(key);
    if (it != vid.end()) return it->second;
    const Point a = corner_point(g, lo[0], lo[1], lo[2]);
    const Point b = corner_point(g, lo[0] + (diff & 1), lo[1] + ((diff >> 1) & 1),
                                 lo[2] + ((diff >> 2) & 1));
    const int id = static_cast<int>(c.vertices.size());
    c.vertices.push_back(lerp(a, b, t));
    vid.emplace(key, id);
    return id;
  };
  for (int i = 0; i + 1 < n; ++i)
    for (int j = 0; j + 1 < n; ++j)
      for (int k = 0; k + 1 < n; ++k) {
        double cv[8];
        Point cp[8];
        for (int q = 0; q < 8; ++q) {
          const int ci = i + (q & 1), cj = j + ((q >> 1) & 1), ck = k + ((q >> 2) & 1);
          cv[q] = f.values[g.index(ci, cj, ck)];
          cp[q] = corner_point(g, ci, cj, ck);
        }
        for (const auto& tet : kKuhn) {
          double v[4];
          Point p[4];
          for (int q = 0; q < 4; ++q) {
            v[q] = cv[tet[q]];
            p[q] = cp[tet[q]];
          }
          auto edge_vertex = [&](int qa, int qb) {
            int ca = tet[qa], cb = tet[qb];
            double va = v[qa], vb = v[qb];
            if (ca > cb) {
              std::swap(ca, cb);
              std::swap(va, vb);
            }
            const std::array<int, 3> lo{i + (ca & 1), j + ((ca >> 1) & 1), k + ((ca >> 2) & 1)};
            return vertex(lo, cb - ca, crossing(va, vb, level));
          };
          march_tet(v, p, level, [&](const TetVertex* tri, const Point& outward) {
            std::array<int, 3> ids{};
            for (int m = 0; m < 3; ++m) ids[m] = edge_vertex(tri[m].a, tri[m].b);
            const Point nrm = cross(sub(c.vertices[ids[1]], c.vertices[ids[0]]),
                                    sub(c.vertices[ids[2]], c.vertices[ids[0]]));
            if (dot(nrm, outward) < 0.0) std::swap(ids[1], ids[2]);
            c.triangles.push_back(ids);
          });
        }
      }
  UnionFind uf(c.vertices.size());
  for (const auto& t : c.triangles) {
    uf.unite(t[0], t[1]);
    uf.unite(t[1], t[2]);
  }
  std::unordered_map<int, int> comp;
  c.loop_id.resize(c.vertices.size());
  for (std::size_t v = 0; v < c.vertices.size(); ++v) {
    const int root = uf.find(static_cast<int>(v));
    auto [it, fresh] = comp.emplace(root, static_cast<int>(comp.size()));
    c.loop_id[v] = it->second;
  }
  return c;
}

}  // namespace

int Contour::loop_count() const {
  if (loop_id.empty()) return 0;
  return *std::max_element(loop_id.begin(), loop_id.end()) + 1;
}

double Contour::measure() const {
  double total = 0.0;
  if (dim == 2) {
    for (const auto& s : segments) total += norm(sub(vertices[s[1]], vertices[s[0]]));
  } else {
    for (const auto& t : triangles)
      total += 0.5 * norm(cross(sub(vertices[t[1]], vertices[t[0]]),
                                sub(vertices[t[2]], vertices[t[0]])));
  }
  return total;
}

Contour extract_contour(const ScalarField& field, double level) {
  check_level(field, level);
  if (field.max() <= level) {
    Contour empty;
    empty.dim = field.grid.dim;
    return empty;
  }
  check_boundary(field, level);
  return field.grid.dim == 2 ? extract_2d(field, level) : extract_3d(field, level);
}

double periodic_level_measure(const ScalarField& field, double level) {
  const GridSpec& g = field.grid;
  const int n = g.cells;
  const double h = g.spacing();
  auto w = [n](int v) { return v % n; };
  if (g.dim == 2) {
    std::vector<double> rows(n, 0.0);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j) {
        double v[4];
        Point p[4];
        for (int q = 0; q < 4; ++q) {
          v[q] = field.values[g.index(w(i + kSquareCorner[q][0]), w(j + kSquareCorner[q][1]))];
          p[q] = {kSquareCorner[q][0] * h, kSquareCorner[q][1] * h, 0.0};
        }
        auto pos = [&](int e) {
          const int a = e, b = (e + 1) % 4;
          return lerp(p[a], p[b], (level - v[a]) / (v[b] - v[a]));
        };
        march_square(v, level,
                     [&](int es, int ee) { acc += norm(sub(pos(ee), pos(es))); });
      }
      rows[i] = acc;
    }
    return std::accumulate(rows.begin(), rows.end(), 0.0);
  }
  std::vector<double> slabs(n, 0.0);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double cv[8];
        Point cp[8];
        for (int q = 0; q < 8; ++q) {
          const int di = q & 1, dj = (q >> 1) & 1, dk = (q >> 2) & 1;
          cv[q] = field.values[g.index(w(i + di), w(j + dj), w(k + dk))];
          cp[q] = {di * h, dj * h, dk * h};
        }
        for (const auto& tet : kKuhn) {
          double v[4];
          Point p[4];
          for (int q = 0; q < 4; ++q) {
            v[q] = cv[tet[q]];
            p[q] = cp[tet[q]];
          }
          march_tet(v, p, level, [&](const TetVertex* tri, const Point&) {
            Point x[3];
            for (int m = 0; m < 3; ++m) {
              const int a = tri[m].a, b = tri[m].b;
              x[m] = lerp(p[a], p[b], (level - v[a]) / (v[b] - v[a]));
            }
            acc += 0.5 * norm(cross(sub(x[1], x[0]), sub(x[2], x[0])));
          });
        }
      }
    slabs[i] = acc;
  }
  return std::accumulate(slabs.begin(), slabs.end(), 0.0);
}

std::vector<Point> element_vertex_normals(const Contour& c) {
  std::vector<Point> n(c.vertices.size(), Point{});
  if (c.dim == 2) {
    for (const auto& s : c.segments) {
      const Point d = sub(c.vertices[s[1]], c.vertices[s[0]]);
      const double len = norm(d);
      if (len == 0.0) continue;
      const Point out{d[1] / len, -d[0] / len, 0.0};
      for (int v : s)
        for (int k = 0; k < 2; ++k) n[v][k] += out[k];
    }
  } else {
    for (const auto& t : c.triangles) {
      const Point a = cross(sub(c.vertices[t[1]], c.vertices[t[0]]),
                            sub(c.vertices[t[2]], c.vertices[t[0]]));
      for (int v : t)
        for (int k = 0; k < 3; ++k) n[v][k] += a[k];
    }
  }
  for (auto& v : n) {
    const double len = norm(v);
    if (len > 0.0)
      for (double& x : v) x /= len;
  }
  return n;
}

Contour make_polygon_contour(const std::vector<Point>& points) {
  Contour c;
  c.dim = 2;
  c.vertices = points;
  const int m = static_cast<int>(points.size());
  for (int k = 0; k < m; ++k) c.segments.push_back({k, (k + 1) % m});
  c.loop_id.assign(points.size(), 0);
  return c;
}

Contour make_ellipse_contour(const Point& center, double a, double b, int vertices) {
  std::vector<Point> pts(vertices);
  for (int k = 0; k < vertices; ++k) {
    const double th = 2.0 * M_PI * k / vertices;
    pts[k] = {center[0] + a * std::cos(th), center[1] + b * std::sin(th), 0.0};
  }
  return make_polygon_contour(pts);
}

void write_contour_csv(const Contour& contour, std::ostream& out) {
  out << (contour.dim == 2 ? "x,y,loop_id\n" : "x,y,z,loop_id\n");
  out.precision(17);
  for (std::size_t v = 0; v < contour.vertices.size(); ++v) {
    const auto& p = contour.vertices[v];
    out << p[0] << ',' << p[1];
    if (contour.dim == 3) out << ',' << p[2];
    out << ',' << (contour.loop_id.empty() ? 0 : contour.loop_id[v]) << '\n';
  }
}

void write_contour_csv(const Contour& contour, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path);
  write_contour_csv(contour, out);
}

}  // namespace mbo

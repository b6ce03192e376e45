#include "mbo/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace mbo::kernels {

namespace {

inline double wavenumber(int idx, int cells, double extent) {
  const int signed_idx = idx <= cells / 2 ? idx : idx - cells;
  return 2.0 * std::numbers::pi * signed_idx / extent;
}

inline double dist2(const Point& a, const Point& b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return dx * dx + dy * dy + dz * dz;
}

// One spectrum row: every entry shares the leading wavenumbers.
inline void symbol_row(std::complex<double>* row, int half, int cells, double extent, double kk_lead,
                       double t, double scale) {
  for (int c = 0; c < half; ++c) {
    const double kc = wavenumber(c, cells, extent);
    row[c] *= scale * std::exp(-(kk_lead + kc * kc) * t);
  }
}

inline int wrap(int i, int n) { return i < 0 ? i + n : (i >= n ? i - n : i); }

void smooth_axis(const GridSpec& grid, const double* in, double* out, int axis, bool omp) {
  const int n = grid.cells;
  const std::size_t total = grid.size();
  std::size_t stride = 1;
  for (int a = grid.dim - 1; a > axis; --a) stride *= static_cast<std::size_t>(n);
  const auto body = [&](std::size_t idx) {
    const int coord = static_cast<int>((idx / stride) % n);
    const std::size_t base = idx - static_cast<std::size_t>(coord) * stride;
    const double lo = in[base + static_cast<std::size_t>(wrap(coord - 1, n)) * stride];
    const double hi = in[base + static_cast<std::size_t>(wrap(coord + 1, n)) * stride];
    out[idx] = (lo + in[idx] + hi) / 3.0;
  };
  if (omp) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(total); ++i) body(i);
  } else {
    for (std::size_t i = 0; i < total; ++i) body(i);
  }
}

void box_smooth_impl(const GridSpec& grid, std::span<const double> in, std::span<double> out,
                     bool omp) {
  std::vector<double> a(in.begin(), in.end());
  std::vector<double> b(a.size());
  for (int axis = 0; axis < grid.dim; ++axis) {
    smooth_axis(grid, a.data(), b.data(), axis, omp);
    std::swap(a, b);
  }
  std::copy(a.begin(), a.end(), out.begin());
}

inline void nearest_segment(const Point& q, std::span<const Point> a, std::span<const Point> b,
                            double& best_d, int& best_i) {
  double best = std::numeric_limits<double>::infinity();
  int idx = -1;
  for (std::size_t s = 0; s < a.size(); ++s) {
    const double d = dist2(q, closest_on_segment(q, a[s], b[s]));
    if (d < best) {
      best = d;
      idx = static_cast<int>(s);
    }
  }
  best_d = std::sqrt(best);
  best_i = idx;
}

}  // namespace

Point closest_on_segment(const Point& p, const Point& a, const Point& b) {
  Point ab{b[0] - a[0], b[1] - a[1], b[2] - a[2]};
  const double len2 = ab[0] * ab[0] + ab[1] * ab[1] + ab[2] * ab[2];
  double s = 0.0;
  if (len2 > 0.0) {
    s = ((p[0] - a[0]) * ab[0] + (p[1] - a[1]) * ab[1] + (p[2] - a[2]) * ab[2]) / len2;
    s = std::clamp(s, 0.0, 1.0);
  }
  return {a[0] + s * ab[0], a[1] + s * ab[1], a[2] + s * ab[2]};
}

std::size_t spectrum_size(const GridSpec& grid) {
  std::size_t n = static_cast<std::size_t>(grid.cells / 2 + 1);
  for (int a = 1; a < grid.dim; ++a) n *= static_cast<std::size_t>(grid.cells);
  return n;
}

namespace serial {

void threshold(std::span<const double> values, std::span<std::uint8_t> bits) {
  for (std::size_t i = 0; i < values.size(); ++i) bits[i] = values[i] >= 0.0 ? 1 : 0;
}

void pm_one(std::span<const std::uint8_t> bits, std::span<double> values) {
  for (std::size_t i = 0; i < bits.size(); ++i) values[i] = bits[i] ? 1.0 : -1.0;
}

std::size_t count_differences(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.size(); ++i) n += (a[i] != b[i]);
  return n;
}

// same block partition as the parallel version, so the two agree bit for bit
double sum(std::span<const double> values) {
  double s = 0.0;
  for (std::size_t lo = 0; lo < values.size(); lo += kReductionBlock) {
    const std::size_t hi = std::min(values.size(), lo + kReductionBlock);
    double b = 0.0;
    for (std::size_t i = lo; i < hi; ++i) b += values[i];
    s += b;
  }
  return s;
}

void heat_symbol(const GridSpec& grid, std::span<std::complex<double>> spectrum, double t,
                 double scale) {
  const int n = grid.cells, half = n / 2 + 1;
  const std::size_t rows = spectrum.size() / half;
  for (std::size_t r = 0; r < rows; ++r) {
    double kk = 0.0;
    if (grid.dim == 2) {
      const double k0 = wavenumber(static_cast<int>(r), n, grid.extent);
      kk = k0 * k0;
    } else {
      const double k0 = wavenumber(static_cast<int>(r / n), n, grid.extent);
      const double k1 = wavenumber(static_cast<int>(r % n), n, grid.extent);
      kk = k0 * k0 + k1 * k1;
    }
    symbol_row(spectrum.data() + r * half, half, n, grid.extent, kk, t, scale);
  }
}

void box_smooth(const GridSpec& grid, std::span<const double> in, std::span<double> out) {
  box_smooth_impl(grid, in, out, false);
}

void segment_distance(std::span<const Point> queries, std::span<const Point> a,
                      std::span<const Point> b, std::span<double> distance,
                      std::span<int> nearest) {
  for (std::size_t q = 0; q < queries.size(); ++q)
    nearest_segment(queries[q], a, b, distance[q], nearest[q]);
}

}  // namespace serial

namespace parallel {

void threshold(std::span<const double> values, std::span<std::uint8_t> bits) {
  const auto n = static_cast<std::ptrdiff_t>(values.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) bits[i] = values[i] >= 0.0 ? 1 : 0;
}

void pm_one(std::span<const std::uint8_t> bits, std::span<double> values) {
  const auto n = static_cast<std::ptrdiff_t>(bits.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) values[i] = bits[i] ? 1.0 : -1.0;
}

std::size_t count_differences(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
  const auto n = static_cast<std::ptrdiff_t>(a.size());
  std::size_t total = 0;
#pragma omp parallel for reduction(+ : total) schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) total += (a[i] != b[i]);
  return total;
}

double sum(std::span<const double> values) {
  const std::size_t blocks = (values.size() + kReductionBlock - 1) / kReductionBlock;
  std::vector<double> partial(blocks, 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t blk = 0; blk < static_cast<std::ptrdiff_t>(blocks); ++blk) {
    const std::size_t lo = blk * kReductionBlock;
    const std::size_t hi = std::min(values.size(), lo + kReductionBlock);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += values[i];
    partial[blk] = s;
  }
  double s = 0.0;
  for (double p : partial) s += p;
  return s;
}

void heat_symbol(const GridSpec& grid, std::span<std::complex<double>> spectrum, double t,
                 double scale) {
  const int n = grid.cells, half = n / 2 + 1;
  const auto rows = static_cast<std::ptrdiff_t>(spectrum.size() / half);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    double kk = 0.0;
    if (grid.dim == 2) {
      const double k0 = wavenumber(static_cast<int>(r), n, grid.extent);
      kk = k0 * k0;
    } else {
      const double k0 = wavenumber(static_cast<int>(r / n), n, grid.extent);
      const double k1 = wavenumber(static_cast<int>(r % n), n, grid.extent);
      kk = k0 * k0 + k1 * k1;
    }
    symbol_row(spectrum.data() + r * half, half, n, grid.extent, kk, t, scale);
  }
}

void box_smooth(const GridSpec& grid, std::span<const double> in, std::span<double> out) {
  box_smooth_impl(grid, in, out, true);
}

void segment_distance(std::span<const Point> queries, std::span<const Point> a,
                      std::span<const Point> b, std::span<double> distance,
                      std::span<int> nearest) {
  const auto n = static_cast<std::ptrdiff_t>(queries.size());
#pragma omp parallel for schedule(dynamic, 64)
  for (std::ptrdiff_t q = 0; q < n; ++q) nearest_segment(queries[q], a, b, distance[q], nearest[q]);
}

}  // namespace parallel

}  // namespace mbo::kernels

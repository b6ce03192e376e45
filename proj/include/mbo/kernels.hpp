#pragma once

// Cell-parallel inner loops. Each kernel has a plain serial reference in
// mbo::kernels::serial and an OpenMP version in mbo::kernels::parallel; the
// library calls the parallel ones, tests check them against the serial ones
// and bench/ times both. Parallel reductions use fixed-size blocks so the
// result does not depend on the thread count.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>

#include "mbo/grid.hpp"

namespace mbo::kernels {

inline constexpr std::size_t kReductionBlock = 4096;

/// Squared angular wavenumber |2πk/extent|² of each r2c spectrum entry, in
/// FFTW's half-complex layout (last axis has cells/2 + 1 entries).
std::size_t spectrum_size(const GridSpec& grid);

namespace serial {

void threshold(std::span<const double> values, std::span<std::uint8_t> bits);
void pm_one(std::span<const std::uint8_t> bits, std::span<double> values);
std::size_t count_differences(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);
double sum(std::span<const double> values);
/// Multiplies the spectrum by exp(−|k|² t) and by `scale`.
void heat_symbol(const GridSpec& grid, std::span<std::complex<double>> spectrum, double t,
                 double scale);
/// Periodic separable 3-point box filter (27-point in 3D).
void box_smooth(const GridSpec& grid, std::span<const double> in, std::span<double> out);
/// Distance from every query point to the closest of the 2D segments; the
/// index of that segment goes to `nearest`.
void segment_distance(std::span<const Point> queries, std::span<const Point> a,
                      std::span<const Point> b, std::span<double> distance,
                      std::span<int> nearest);

}  // namespace serial

namespace parallel {

void threshold(std::span<const double> values, std::span<std::uint8_t> bits);
void pm_one(std::span<const std::uint8_t> bits, std::span<double> values);
std::size_t count_differences(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b);
double sum(std::span<const double> values);
void heat_symbol(const GridSpec& grid, std::span<std::complex<double>> spectrum, double t,
                 double scale);
void box_smooth(const GridSpec& grid, std::span<const double> in, std::span<double> out);
void segment_distance(std::span<const Point> queries, std::span<const Point> a,
                      std::span<const Point> b, std::span<double> distance,
                      std::span<int> nearest);

}  // namespace parallel

/// Closest point on segment [a, b] to p (any dimension up to 3).
Point closest_on_segment(const Point& p, const Point& a, const Point& b);

}  // namespace mbo::kernels

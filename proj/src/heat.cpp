#include "mbo/heat.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "mbo/kernels.hpp"

namespace mbo::heat {

namespace {

template <class T>
struct FftwDeleter {
  void operator()(T* p) const { fftw_free(p); }
};
template <class T>
using FftwBuffer = std::unique_ptr<T[], FftwDeleter<T>>;

template <class T>
FftwBuffer<T> fftw_buffer(std::size_t n) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * n));
  if (!p) throw std::bad_alloc();
  return FftwBuffer<T>(p);
}

struct Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  ~Plans() {
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }
};

// FFTW's planner is not thread-safe; plan creation is serialized here and the
// plans are executed on caller-owned aligned buffers.
class PlanCache {
 public:
  const Plans& get(const GridSpec& g) {
    std::lock_guard lock(mutex_);
    const auto key = std::make_pair(g.dim, g.cells);
    auto it = plans_.find(key);
    if (it != plans_.end()) return *it->second;
    int n[3] = {g.cells, g.cells, g.cells};
    auto real = fftw_buffer<double>(g.size());
    auto spec = fftw_buffer<fftw_complex>(kernels::spectrum_size(g));
    auto p = std::make_unique<Plans>();
    p->forward = fftw_plan_dft_r2c(g.dim, n, real.get(), spec.get(), FFTW_ESTIMATE);
    p->backward = fftw_plan_dft_c2r(g.dim, n, spec.get(), real.get(), FFTW_ESTIMATE);
    const Plans& ref = *p;
    plans_.emplace(key, std::move(p));
    return ref;
  }

 private:
  std::mutex mutex_;
  std::map<std::pair<int, int>, std::unique_ptr<Plans>> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

double signed_wavenumber(int idx, int cells, double extent) {
  const int s = idx <= cells / 2 ? idx : idx - cells;
  return 2.0 * std::numbers::pi * s / extent;
}

}  // namespace

double heat_kernel(const Point& x, const HeatKernelParams& params) {
  if (!(params.t > 0.0)) throw Error(ErrorKind::InvalidArgument, "heat kernel needs t > 0");
  double r2 = 0.0;
  for (int i = 0; i < params.dim; ++i) r2 += x[i] * x[i];
  return std::exp(-r2 / (4.0 * params.t)) /
         std::pow(4.0 * std::numbers::pi * params.t, 0.5 * params.dim);
}

void check_diffusion_time(const GridSpec& grid, double t) {
  if (!(t > 0.0)) throw Error(ErrorKind::InvalidArgument, "diffusion time must be positive");
  if (t > grid.extent * grid.extent / 16.0)
    throw Error(ErrorKind::InvalidArgument, "diffusion time exceeds extent^2/16");
}

ScalarField diffuse(const ScalarField& field, double t) {
  const GridSpec& g = field.grid;
  check_diffusion_time(g, t);
  const Plans& plans = plan_cache().get(g);
  const std::size_t nspec = kernels::spectrum_size(g);
  auto real = fftw_buffer<double>(g.size());
  auto spec = fftw_buffer<fftw_complex>(nspec);
  std::memcpy(real.get(), field.values.data(), g.size() * sizeof(double));
  fftw_execute_dft_r2c(plans.forward, real.get(), spec.get());
  std::span<std::complex<double>> modes(reinterpret_cast<std::complex<double>*>(spec.get()), nspec);
  kernels::parallel::heat_symbol(g, modes, t, 1.0 / static_cast<double>(g.size()));
  fftw_execute_dft_c2r(plans.backward, spec.get(), real.get());
  ScalarField out(g);
  std::memcpy(out.values.data(), real.get(), g.size() * sizeof(double));
  return out;
}

ScalarField synthesize(const GridSpec& grid, const SpectrumFn& coefficient, double t) {
  if (t < 0.0) throw Error(ErrorKind::InvalidArgument, "synthesis time must be >= 0");
  const Plans& plans = plan_cache().get(grid);
  const int n = grid.cells, half = n / 2 + 1;
  const std::size_t nspec = kernels::spectrum_size(grid);
  auto spec = fftw_buffer<fftw_complex>(nspec);
  auto real = fftw_buffer<double>(grid.size());
  const double shift = 0.5 * grid.spacing();
  const double inv_volume = 1.0 / std::pow(grid.extent, grid.dim);
  const std::size_t rows = nspec / half;
  for (std::size_t r = 0; r < rows; ++r) {
    Wavevector k{};
    if (grid.dim == 2) {
      k[0] = signed_wavenumber(static_cast<int>(r), n, grid.extent);
    } else {
      k[0] = signed_wavenumber(static_cast<int>(r / n), n, grid.extent);
      k[1] = signed_wavenumber(static_cast<int>(r % n), n, grid.extent);
    }
    for (int c = 0; c < half; ++c) {
      k[grid.dim - 1] = signed_wavenumber(c, n, grid.extent);
      double kk = 0.0, phase = 0.0;
      for (int a = 0; a < grid.dim; ++a) {
        kk += k[a] * k[a];
        phase += k[a] * shift;
      }
      const std::complex<double> v = coefficient(k) * std::exp(-kk * t) * inv_volume *
                                     std::polar(1.0, phase);
      spec[r * half + c][0] = v.real();
      spec[r * half + c][1] = v.imag();
    }
  }
  fftw_execute_dft_c2r(plans.backward, spec.get(), real.get());
  ScalarField out(grid);
  std::memcpy(out.values.data(), real.get(), grid.size() * sizeof(double));
  return out;
}

std::pair<double, double> kernel_l1_norms(double t, int dim) {
  if (!(t > 0.0)) throw Error(ErrorKind::InvalidArgument, "kernel norms need t > 0");
  const double grad = std::tgamma(0.5 * (dim + 1)) / (std::tgamma(0.5 * dim) * std::sqrt(t));
  return {1.0, grad};
}

}  // namespace mbo::heat

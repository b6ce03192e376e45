#include <cmath>
#include <random>

#include "mbo/ansatz.hpp"
#include "mbo/geometry.hpp"
#include "mbo/heat.hpp"
#include "mbo/oracles.hpp"
#include "mbo/study.hpp"

namespace mbo::study {

namespace {

SuiteResult finish(std::string name, double err, double tol) {
  return {std::move(name), err, tol, err <= tol};
}

std::vector<double> random_kappas(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> k(-5.0, 5.0);
  std::vector<double> out(n);
  for (double& v : out) v = k(rng);
  return out;
}

// Offset with |r κᵢ| ≤ 1/2.
double safe_offset(std::mt19937_64& rng, const std::vector<double>& kappas) {
  double kmax = 1e-12;
  for (double k : kappas) kmax = std::max(kmax, std::abs(k));
  return std::uniform_real_distribution<double>(-0.5, 0.5)(rng) / kmax;
}

}  // namespace

std::vector<SuiteResult> verify_identities(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<SuiteResult> out;
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  {
    double e1 = 0.0, e2 = 0.0;
    for (int i = 0; i < 100; ++i) {
      const double h = std::pow(10.0, -5.0 + 3.0 * unit(rng));
      const double t = h * (0.02 + 0.96 * unit(rng));
      const double d0 = (unit(rng) * 10.0 - 5.0) * std::sqrt(h);
      double l1 = 0.0;
      const double q1 = oracles::gaussian_integral_1_quadrature(d0, t, h, &l1);
      if (l1 > 0.0) e1 = std::max(e1, std::abs(q1 - ansatz::gaussian_integral_1(d0, t, h)) / l1);
      const double q2 = oracles::gaussian_integral_2_quadrature(d0, t, h, &l1);
      e2 = std::max(e2, std::abs(q2 - ansatz::gaussian_integral_2(d0, t, h)) / l1);
    }
    out.push_back(finish("gaussian_integral_1", e1, 1e-10));
    out.push_back(finish("gaussian_integral_2", e2, 1e-10));
  }
  {
    double e_diff = 0.0, e_round = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const auto k = random_kappas(rng, 1 + static_cast<int>(unit(rng) * 3));
      const double r = safe_offset(rng, k);
      const auto s0 = geometry::make_sample(k);
      const auto sr = geometry::offset_curvatures(k, r);
      const double lhs = sr.mean_sum - s0.mean_sum, rhs = r * geometry::psi(r, k);
      e_diff = std::max(e_diff, std::abs(lhs - rhs) / std::max(1.0, std::abs(sr.mean_sum)));
      const auto back = geometry::offset_curvatures(sr.kappas, -r);
      for (std::size_t j = 0; j < k.size(); ++j)
        e_round = std::max(e_round, std::abs(back.kappas[j] - k[j]) / std::max(1.0, std::abs(k[j])));
    }
    out.push_back(finish("offset_mean_curvature_identity", e_diff, 1e-14));
    out.push_back(finish("offset_round_trip", e_round, 1e-12));
  }
  {
    double e = 0.0;
    std::normal_distribution<double> g(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
      const int n = 1 + i % 2;
      Eigen::VectorXd grad(n);
      Eigen::MatrixXd hess(n, n);
      for (int a = 0; a < n; ++a) grad[a] = g(rng);
      for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) hess(a, b) = hess(b, a) = g(rng);
      const double tr = geometry::weingarten_graph(grad, hess).trace();
      e = std::max(e, std::abs(tr - geometry::mean_curvature_graph(grad, hess)) /
                          std::max(1.0, std::abs(tr)));
    }
    out.push_back(finish("graph_mean_curvature_trace", e, 1e-12));
  }
  {
    double e = 0.0;
    for (int i = 0; i < 200; ++i) {
      const double x = std::pow(10.0, -2.0 + 4.0 * unit(rng));
      const double D = unit(rng) * 5.0;
      const double y = oracles::gronwall_phi(x, D);
      e = std::max(e, std::abs(oracles::gronwall_phi_inv(y, D) - x) / x);
    }
    out.push_back(finish("gronwall_round_trip", e, 1e-10));
  }
  {
    double e_mass = 0.0, e_grad = 0.0, e_scale = 0.0;
    for (int dim : {2, 3}) {
      const double ref = heat::kernel_l1_norms(1e-3, dim).second * std::sqrt(1e-3);
      for (double t : {1e-4, 3e-4, 1e-3}) {
        e_mass = std::max(e_mass, std::abs(oracles::heat_kernel_l1_quadrature(t, dim) - 1.0));
        const double g = heat::kernel_l1_norms(t, dim).second;
        e_grad = std::max(e_grad, std::abs(oracles::heat_kernel_gradient_l1_quadrature(t, dim) - g) / g);
        e_scale = std::max(e_scale, std::abs(g * std::sqrt(t) - ref) / ref);
      }
    }
    out.push_back(finish("heat_kernel_mass", e_mass, 1e-12));
    out.push_back(finish("heat_kernel_gradient_norm", e_grad, 1e-8));
    out.push_back(finish("heat_kernel_gradient_scaling", e_scale, 1e-10));
  }
  {
    double e = 0.0;
    for (int i = 0; i < 100; ++i) {
      const double t = std::pow(10.0, -5.0 + 3.0 * unit(rng));
      const double r = (unit(rng) * 8.0 - 4.0) * std::sqrt(t);
      const double d = 1e-3 * std::sqrt(t);
      const double fd = (-ansatz::u0_profile(r + 2 * d, t) + 8 * ansatz::u0_profile(r + d, t) -
                         8 * ansatz::u0_profile(r - d, t) + ansatz::u0_profile(r - 2 * d, t)) /
                        (12 * d);
      const double exact = ansatz::u0_r(r, t);
      e = std::max(e, std::abs(fd - exact) / ansatz::u0_r(0.0, t));
    }
    out.push_back(finish("profile_derivative", e, 1e-8));
  }
  return out;
}

}  // namespace mbo::study

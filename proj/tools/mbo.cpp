#include <omp.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>

#include <CLI11.hpp>

#include "mbo/field_io.hpp"
#include "mbo/oracles.hpp"
#include "mbo/scheme.hpp"
#include "mbo/study.hpp"

namespace fs = std::filesystem;
using namespace mbo;

namespace {

struct Common {
  std::string config;
  std::string out = "out";
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 0;
  bool snapshots = false;
};

study::StudyConfig load(const Common& c) {
  auto cfg = study::load_config(c.config);
  if (c.seed_set) cfg.seed = c.seed;
  return cfg;
}

void print_report(const study::ConvergenceReport& rep) {
  std::cout << rep.study << ": " << (rep.pass ? "PASS" : "FAIL");
  if (rep.fitted)
    std::cout << "  slope " << rep.slope << "  95% CI [" << rep.ci_low << ", " << rep.ci_high << "]";
  std::cout << '\n';
  for (const auto& [k, v] : rep.summary) std::cout << "  " << k << " = " << v << '\n';
  for (const auto& n : rep.notes) std::cout << "  note: " << n << '\n';
}

int cmd_run(const Common& c) {
  const auto cfg = load(c);
  const GridSpec grid = cfg.grid();
  scheme::MboConfig mc;
  mc.h = cfg.h.front();
  mc.steps = cfg.steps;
  mc.delta_check = cfg.delta_check;
  mc.rho = cfg.rho;
  if (std::holds_alternative<HalfSpace>(cfg.shape)) mc.enforce_clearance = false;
  fs::create_directories(c.out);
  const PhaseField phase0 = indicator_from_shape(cfg.shape, grid);
  if (c.snapshots && grid.dim == 2) write_pgm(phase0, (fs::path(c.out) / "step_0000.pgm").string());
  const auto traj = scheme::run(phase0, mc, max_weingarten_norm(cfg.shape, grid.dim),
                                [&](int k, const ScalarField&, const PhaseField& p) {
                                  if (!c.snapshots || grid.dim != 2) return;
                                  char name[32];
                                  std::snprintf(name, sizeof name, "step_%04d.pgm", k);
                                  write_pgm(p, (fs::path(c.out) / name).string());
                                });
  std::ofstream csv(fs::path(c.out) / "run.csv");
  csv << std::setprecision(17) << "step,perimeter,volume,jump_volume,clearance,equivalent_radius\n";
  for (std::size_t k = 0; k < traj.records.size(); ++k) {
    const auto& r = traj.records[k];
    csv << r.step << ',' << r.perimeter << ',' << r.volume << ',' << r.jump_volume << ','
        << r.clearance << ',' << equivalent_radius(traj.phases[k]) << '\n';
  }
  write_field(traj.phases.back(), (fs::path(c.out) / "final.mbofld").string());
  std::cout << "run: " << traj.records.size() - 1 << " steps"
            << (traj.extinct ? " (extinct)" : "") << ", final volume " << traj.records.back().volume
            << '\n';
  return 0;
}

int cmd_study(const Common& c, bool stability) {
  const auto cfg = load(c);
  if (stability != (cfg.kind == study::StudyKind::Stability))
    throw Error(ErrorKind::Config, stability ? "config is not a stability study"
                                             : "use the stability subcommand for stability studies");
  const auto rep = study::run_study(cfg);
  study::write_report(rep, c.out);
  print_report(rep);
  return rep.pass ? 0 : 1;
}

int cmd_verify(const Common& c) {
  std::uint64_t seed = c.seed_set ? c.seed : 1;
  if (!c.config.empty()) seed = c.seed_set ? c.seed : study::load_config(c.config).seed;
  const auto suites = study::verify_identities(seed);
  fs::create_directories(c.out);
  std::ofstream csv(fs::path(c.out) / "verify.csv");
  csv << std::setprecision(17) << "suite,max_error,tolerance,pass\n";
  bool all = true;
  for (const auto& s : suites) {
    csv << s.name << ',' << s.max_error << ',' << s.tolerance << ',' << (s.pass ? 1 : 0) << '\n';
    std::cout << (s.pass ? "PASS " : "FAIL ") << std::left << std::setw(34) << s.name
              << " max error " << std::setprecision(3) << std::scientific << s.max_error
              << " (tol " << s.tolerance << ")\n"
              << std::defaultfloat;
    all = all && s.pass;
  }
  return all ? 0 : 1;
}

int cmd_oracle(double R0, double h, int dim) {
  const auto step = oracles::radial_mbo_step_oracle(R0, h, dim);
  std::cout << std::setprecision(15);
  if (step.extinct) {
    std::cout << "extinct\n";
    return 0;
  }
  std::cout << "radius " << step.radius << '\n';
  if (R0 * R0 > 2.0 * (dim - 1) * h)
    std::cout << "flow   " << oracles::exact_sphere_radius(R0, dim - 1, h) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Threshold dynamics (MBO) for motion by mean curvature"};
  app.require_subcommand(1);
  Common c;
  auto add_common = [&](CLI::App* sub, bool need_config) {
    auto* opt = sub->add_option("--config", c.config, "JSON study config");
    if (need_config) opt->required();
    sub->add_option("--out", c.out, "output directory");
    sub->add_option("--seed", c.seed, "seed for randomized suites")->each([&](const std::string&) {
      c.seed_set = true;
    });
    sub->add_option("--threads", c.threads, "OpenMP threads");
  };
  auto* run = app.add_subcommand("run", "run the MBO scheme on the configured shape");
  add_common(run, true);
  run->add_flag("--snapshots", c.snapshots, "write a PGM per step (2D)");
  auto* converge = app.add_subcommand("converge", "run a convergence study");
  add_common(converge, true);
  auto* stability = app.add_subcommand("stability", "run the stability study");
  add_common(stability, true);
  auto* verify = app.add_subcommand("verify", "check the closed-form identities");
  add_common(verify, false);
  auto* oracle = app.add_subcommand("oracle", "grid-free one-step radius of a ball");
  oracle->set_help_flag("--help", "print help");
  double R0 = 0.3, h = 1e-4;
  int dim = 2;
  oracle->add_option("--R0", R0, "initial radius");
  oracle->add_option("--h", h, "time step");
  oracle->add_option("--dim", dim, "ambient dimension")->check(CLI::IsMember({2, 3}));

  CLI11_PARSE(app, argc, argv);
  try {
    if (c.threads > 0) omp_set_num_threads(c.threads);
    if (*run) return cmd_run(c);
    if (*converge) return cmd_study(c, false);
    if (*stability) return cmd_study(c, true);
    if (*verify) return cmd_verify(c);
    if (*oracle) return cmd_oracle(R0, h, dim);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

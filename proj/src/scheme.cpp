#include "mbo/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mbo/heat.hpp"
#include "mbo/kernels.hpp"

namespace mbo::scheme {

double MboConfig::effective_rho() const { return rho > 0.0 ? rho : 6.0 * std::sqrt(h); }

StepConditions step_conditions(double h, double max_weingarten, double rho, double ball_radius) {
  StepConditions c;
  c.scale = std::pow(h * std::abs(std::log(h)), 0.25);
  c.local_ok = max_weingarten * c.scale <= 1.0;
  c.tube_ok = c.scale <= rho && rho <= 0.5 * ball_radius;
  return c;
}

PhaseField threshold(const ScalarField& field) {
  PhaseField out(field.grid);
  kernels::parallel::threshold(field.values, out.bits);
  return out;
}

ScalarField level_fraction(const ScalarField& u) {
  const GridSpec& g = u.grid;
  const int n = g.cells;
  const double dx = g.spacing();
  ScalarField out(g);
  const auto total = static_cast<std::ptrdiff_t>(g.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t idx = 0; idx < total; ++idx) {
    const auto c = g.coords(idx);
    double grad2 = 0.0;
    for (int a = 0; a < g.dim; ++a) {
      auto lo = c, hi = c;
      lo[a] = (lo[a] + n - 1) % n;
      hi[a] = (hi[a] + 1) % n;
      const double d = (u.values[g.index(hi[0], hi[1], hi[2])] -
                        u.values[g.index(lo[0], lo[1], lo[2])]) /
                       (2.0 * dx);
      grad2 += d * d;
    }
    const double v = u.values[idx];
    const double grad = std::sqrt(grad2);
    if (grad * dx <= 1e-300 || std::abs(v) >= grad * dx) {
      out.values[idx] = v >= 0.0 ? 1.0 : 0.0;
    } else {
      out.values[idx] = std::clamp(0.5 + v / (grad * dx), 0.0, 1.0);
    }
  }
  return out;
}

namespace {

void check_clearance(const PhaseField& phase, double rho, int step) {
  const double c = boundary_clearance(phase);
  if (c < rho) {
    std::ostringstream msg;
    msg << "step " << step << ": set clearance " << c << " below rho " << rho;
    throw Error(ErrorKind::Clearance, msg.str());
  }
}

double fraction_jump(const PhaseField& plus, const ScalarField& fraction,
                     const ScalarField* weight) {
  std::vector<double> cell(plus.bits.size());
  const auto n = static_cast<std::ptrdiff_t>(cell.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double w = weight ? std::abs(weight->values[i]) : 1.0;
    cell[i] = w * std::abs(static_cast<double>(plus.bits[i]) - fraction.values[i]);
  }
  return kernels::parallel::sum(cell) * plus.grid.cell_volume();
}

StepRecord make_record(int step, const PhaseField& p) {
  StepRecord r;
  r.step = step;
  r.perimeter = perimeter(p);
  r.volume = p.volume();
  r.clearance = boundary_clearance(p);
  return r;
}

}  // namespace

PhaseField mbo_step(const PhaseField& phase, double h, double rho) {
  if (rho > 0.0) check_clearance(phase, rho, 0);
  return threshold(heat::diffuse(to_pm_one(phase), h));
}

Trajectory run(const PhaseField& phase0, const MboConfig& cfg, double max_weingarten,
               const StepObserver& observer) {
  if (!(cfg.h > 0.0)) throw Error(ErrorKind::InvalidArgument, "h must be positive");
  if (cfg.steps < 1) throw Error(ErrorKind::InvalidArgument, "steps must be >= 1");
  heat::check_diffusion_time(phase0.grid, cfg.h);
  if (cfg.delta_check) {
    const auto sc = step_conditions(cfg.h, max_weingarten, cfg.effective_rho(), 0.0);
    if (!sc.local_ok)
      throw Error(ErrorKind::InvalidArgument,
                  "step size violates ||B0|| (h |log h|)^(1/4) <= 1");
  }
  const double rho = cfg.effective_rho();
  Trajectory traj;
  traj.h = cfg.h;
  traj.phases.push_back(phase0);
  traj.records.push_back(make_record(0, phase0));
  for (int k = 1; k <= cfg.steps; ++k) {
    const PhaseField& prev = traj.phases.back();
    if (cfg.enforce_clearance) check_clearance(prev, rho, k - 1);
    const ScalarField u = heat::diffuse(to_pm_one(prev), cfg.h);
    PhaseField next = threshold(u);
    const ScalarField fraction = level_fraction(u);
    StepRecord rec = make_record(k, next);
    rec.jump_volume = fraction_jump(next, fraction, nullptr);
    if (observer) observer(k, u, next);
    if (cfg.record_pre_threshold) traj.pre_threshold.push_back(fraction);
    const bool empty = next.empty();
    traj.phases.push_back(std::move(next));
    traj.records.push_back(rec);
    if (empty) {
      traj.extinct = true;
      traj.extinction_step = k;
      break;
    }
  }
  return traj;
}

double jump_error(const Trajectory& traj, const std::optional<ScalarField>& weight) {
  const std::size_t steps = traj.phases.size() - 1;
  if (traj.pre_threshold.size() != steps)
    throw Error(ErrorKind::Precondition, "trajectory lacks pre-threshold fields");
  if (weight) require_same_grid(weight->grid, traj.phases.front().grid);
  double total = 0.0;
  for (std::size_t k = 0; k < steps; ++k)
    total += fraction_jump(traj.phases[k + 1], traj.pre_threshold[k], weight ? &*weight : nullptr);
  return total;
}

}  // namespace mbo::scheme

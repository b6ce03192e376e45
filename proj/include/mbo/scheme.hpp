#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "mbo/grid.hpp"

namespace mbo::scheme {

struct MboConfig {
  double h = 1e-4;
  int steps = 1;
  /// Enforce ‖B₀‖·(h|log h|)^{1/4} ≤ 1 before running.
  bool delta_check = false;
  /// Required distance between the set and the box boundary; 0 means 6√h.
  double rho = 0.0;
  /// Off for sets that touch the box by design (half-spaces).
  bool enforce_clearance = true;
  /// Keep the per-step sub-cell fraction of {U ≥ 0} (needed by jump_error).
  bool record_pre_threshold = false;

  double effective_rho() const;
};

/// Step-size conditions on the initial surface. `local_ok` is
/// ‖B₀‖(h|log h|)^{1/4} ≤ 1; `tube_ok` is (h|log h|)^{1/4} ≤ ρ ≤ R(Γ₀)/2.
struct StepConditions {
  double scale = 0.0;  // (h|log h|)^{1/4}
  bool local_ok = false;
  bool tube_ok = false;
};
StepConditions step_conditions(double h, double max_weingarten, double rho, double ball_radius);

struct StepRecord {
  int step = 0;
  double perimeter = 0.0;
  double volume = 0.0;
  /// ∫ |χ(kh⁺) − χ(kh⁻)|, with χ(kh⁻) the sub-cell fraction of {U ≥ 0}.
  double jump_volume = 0.0;
  double clearance = 0.0;
};

struct Trajectory {
  std::vector<PhaseField> phases;           // χ(kh⁺), k = 0..steps
  std::vector<StepRecord> records;          // one per phase
  std::vector<ScalarField> pre_threshold;   // k = 1..steps, when recorded
  bool extinct = false;
  int extinction_step = -1;
  double h = 0.0;
};

/// Called after each step with the diffused field U(·,h) and its threshold.
using StepObserver = std::function<void(int step, const ScalarField& diffused, const PhaseField&)>;

/// bit = 1 iff value ≥ 0.
PhaseField threshold(const ScalarField& field);

/// Sub-cell volume fraction of {U ≥ 0}: clamp(1/2 + (U/|∇U|)/spacing, 0, 1).
ScalarField level_fraction(const ScalarField& diffused);

/// threshold(diffuse(2χ − 1, h)). With rho > 0 the input's clearance to the
/// box boundary is checked first.
PhaseField mbo_step(const PhaseField& phase, double h, double rho = 0.0);

/// Iterates mbo_step; stops early with `extinct` when the set empties.
/// Throws Error(Clearance) naming the step when the set comes closer than
/// rho to the box boundary.
Trajectory run(const PhaseField& phase0, const MboConfig& cfg, double max_weingarten = 0.0,
               const StepObserver& observer = {});

/// Σ_k ∫ |ζ|·|χ(kh⁺) − χ(kh⁻)|. ζ ≡ 1 when `weight` is empty.
double jump_error(const Trajectory& traj, const std::optional<ScalarField>& weight = {});

}  // namespace mbo::scheme

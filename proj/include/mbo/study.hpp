#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mbo/contour.hpp"
#include "mbo/grid.hpp"
#include "mbo/shapes.hpp"

namespace mbo::study {

enum class StudyKind { Consistency, RadiusLaw, Stability, JumpError, Perimeter, Topology };

const char* to_string(StudyKind kind);

struct StudyConfig {
  StudyKind kind = StudyKind::Consistency;
  int dim = 2;
  /// Cells per axis; a ladder for the perimeter study, otherwise the first entry.
  std::vector<int> cells{512};
  double extent = 1.0;
  std::vector<double> h{1e-3, 3e-4, 1e-4, 3e-5};
  int steps = 50;
  /// Fixed horizon T for the jump-error study (steps = T/h per run).
  double horizon = 1e-2;
  Shape shape = Ball{{0.5, 0.5, 0.5}, 0.3};
  bool delta_check = true;
  double rho = 0.0;
  double c_star = 1.0;
  /// Steps used to fit the growth constants of the stability study.
  int fit_steps = 10;
  /// Pass thresholds.
  double slope_threshold = 1.4;
  double radius_tolerance = 0.02;
  std::uint64_t seed = 1;
  int bootstrap = 2000;

  GridSpec grid(int level = 0) const;
  /// Throws Error(Config) for invalid combinations.
  void validate() const;
};

/// Defaults of each study kind; parse_config starts from these.
StudyConfig default_config(StudyKind kind);
/// Unknown keys, malformed JSON and invalid values throw Error(Config).
StudyConfig parse_config(const std::string& json_text);
StudyConfig load_config(const std::string& path);
std::string config_to_json(const StudyConfig& cfg);

struct ReportRow {
  double x = 0.0;
  double error = 0.0;
  std::vector<std::pair<std::string, double>> aux;
};

struct ConvergenceReport {
  std::string study;
  std::string x_name = "h";
  std::string error_name = "error";
  std::vector<ReportRow> rows;
  bool fitted = false;
  double slope = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double threshold = 0.0;
  bool pass = false;
  /// Scalars such as fitted constants.
  std::vector<std::pair<std::string, double>> summary;
  std::vector<std::string> notes;

  void sort_rows();
  double value(const std::string& name) const;
};

/// Least-squares slope of log(error) against log(x). Throws DegenerateFit
/// when fewer than two distinct x, any error ≤ 0, or all errors are equal.
double fit_loglog_slope(const std::vector<ReportRow>& rows);
/// Percentile bootstrap 95 % interval of the slope over resampled rows.
std::pair<double, double> bootstrap_slope_ci(const std::vector<ReportRow>& rows,
                                             std::uint64_t seed, int resamples);

void write_csv(const ConvergenceReport& report, std::ostream& out);
std::string summary_json(const ConvergenceReport& report);
/// Writes <dir>/<study>.csv and <dir>/<study>.json.
void write_report(const ConvergenceReport& report, const std::string& dir);

/// One-step oracle error |ρ★ − √(R0² − 2nh)| over the h ladder; passes when
/// the fitted slope reaches the threshold.
ConvergenceReport consistency_study(const StudyConfig& cfg);

/// Grid MBO run of a ball for `steps` steps; compares the final contour
/// radius with the sphere law.
ConvergenceReport radius_law_study(const StudyConfig& cfg);

/// Per-step curvature, perimeter and ball-radius measurements on a 2D
/// ellipse or circle. Curvature and perimeter growth constants are fitted on
/// the first `fit_steps` steps and checked on all; the per-step erosion of m
/// and of the ball radius is checked against 2·C0 (chord endpoints move at
/// speed at most C0).
ConvergenceReport stability_study(const StudyConfig& cfg);

/// Total jump E(h) = Σ_k |Ω(kh⁺) Δ M(Ω((k−1)h⁺), h)| over a fixed horizon
/// for the radial (grid-free) scheme, plus the grid fraction jump.
ConvergenceReport jump_error_study(const StudyConfig& cfg);

/// Perimeter error of the ball indicator over the cells ladder.
ConvergenceReport perimeter_study(const StudyConfig& cfg);

/// Runs the shape and records the component count per step.
ConvergenceReport topology_study(const StudyConfig& cfg);

ConvergenceReport run_study(const StudyConfig& cfg);

/// One formula-identity suite of `verify`.
struct SuiteResult {
  std::string name;
  double max_error = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

std::vector<SuiteResult> verify_identities(std::uint64_t seed);

/// Radius of the disk with the area enclosed by a 2D contour.
double contour_equivalent_radius(const Contour& contour);

}  // namespace mbo::study

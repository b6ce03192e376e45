#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>

#include <json.hpp>

#include "mbo/study.hpp"

namespace mbo::study {

void ConvergenceReport::sort_rows() {
  std::stable_sort(rows.begin(), rows.end(),
                   [](const ReportRow& a, const ReportRow& b) { return a.x < b.x; });
}

double ConvergenceReport::value(const std::string& name) const {
  for (const auto& [k, v] : summary)
    if (k == name) return v;
  return std::numeric_limits<double>::quiet_NaN();
}

double fit_loglog_slope(const std::vector<ReportRow>& rows) {
  if (rows.size() < 2) throw Error(ErrorKind::DegenerateFit, "need at least two rows");
  double sx = 0, sy = 0;
  for (const auto& r : rows) {
    if (!(r.error > 0.0) || !(r.x > 0.0))
      throw Error(ErrorKind::DegenerateFit, "log-log fit needs positive x and error");
    sx += std::log(r.x);
    sy += std::log(r.error);
  }
  const double n = static_cast<double>(rows.size());
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (const auto& r : rows) {
    const double dx = std::log(r.x) - mx, dy = std::log(r.error) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx <= 0.0) throw Error(ErrorKind::DegenerateFit, "all x values are equal");
  if (syy <= 0.0) throw Error(ErrorKind::DegenerateFit, "all errors are equal");
  return sxy / sxx;
}

std::pair<double, double> bootstrap_slope_ci(const std::vector<ReportRow>& rows,
                                             std::uint64_t seed, int resamples) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, rows.size() - 1);
  std::vector<double> slopes;
  std::vector<ReportRow> sample(rows.size());
  for (int b = 0; b < resamples; ++b) {
    for (auto& s : sample) s = rows[pick(rng)];
    try {
      slopes.push_back(fit_loglog_slope(sample));
    } catch (const Error&) {
      // A resample with a single distinct x carries no slope.
    }
  }
  if (slopes.empty()) throw Error(ErrorKind::DegenerateFit, "no usable bootstrap resample");
  std::sort(slopes.begin(), slopes.end());
  auto quantile = [&](double q) {
    const double pos = q * (slopes.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, slopes.size() - 1);
    return slopes[lo] + (pos - lo) * (slopes[hi] - slopes[lo]);
  };
  return {quantile(0.025), quantile(0.975)};
}

void write_csv(const ConvergenceReport& report, std::ostream& out) {
  out << std::setprecision(17);
  out << report.x_name << ',' << report.error_name;
  if (!report.rows.empty())
    for (const auto& [k, v] : report.rows.front().aux) out << ',' << k;
  out << '\n';
  for (const auto& r : report.rows) {
    out << r.x << ',' << r.error;
    for (const auto& [k, v] : r.aux) out << ',' << v;
    out << '\n';
  }
}

namespace {

nlohmann::json number(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

}  // namespace

std::string summary_json(const ConvergenceReport& report) {
  nlohmann::ordered_json j;
  j["study"] = report.study;
  j["slope"] = report.fitted ? number(report.slope) : nlohmann::json(nullptr);
  j["ci"] = report.fitted ? nlohmann::json::array({number(report.ci_low), number(report.ci_high)})
                          : nlohmann::json(nullptr);
  j["threshold"] = number(report.threshold);
  j["pass"] = report.pass;
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.summary) extra[k] = number(v);
  j["summary"] = extra;
  j["notes"] = report.notes;
  return j.dump(2);
}

void write_report(const ConvergenceReport& report, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path base(dir);
  std::ofstream csv(base / (report.study + ".csv"));
  std::ofstream js(base / (report.study + ".json"));
  if (!csv || !js) throw Error(ErrorKind::Io, "cannot write report files in '" + dir + "'");
  write_csv(report, csv);
  js << summary_json(report) << '\n';
}

}  // namespace mbo::study

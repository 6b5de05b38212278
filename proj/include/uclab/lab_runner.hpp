#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "uclab/doubling_suite.hpp"
#include "uclab/frequency_tracker.hpp"
#include "uclab/lab_config.hpp"
#include "uclab/uniqueness_suite.hpp"

namespace uclab {

/// Reals as %.16e (17 significant digits); infinities as inf/-inf.
std::string format_real(double x);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string csv() const;
};

struct Verdict {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct Plot {
  std::string file;
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
};

struct RunRecord {
  Table results;
  std::optional<Table> summary;
  std::vector<Verdict> verdicts;
  std::vector<Plot> plots;
  double seconds = 0.0;
  std::uint64_t hash = 0;

  bool passed() const;
};

struct SweepPoint {
  double M0 = 1.0;
  double M1 = 1.0;
  double p = kInf;
  double q = kInf;
  std::optional<double> p2;
  std::optional<double> q2;
};

/// Cartesian product (p,q pairs) x (p2,q2 pairs) x M0 x M1 in that nesting order.
std::vector<SweepPoint> sweep_points(const ExperimentConfig& cfg);

struct EnsembleMember {
  std::size_t point_index = 0;
  SweepPoint point;
  int run = 0;
  ExponentSet exps;
  PointSelection start;
  FrequencyTrace trace;
  std::vector<DoublingReport> doubling;
  std::optional<VanishingReport> vanishing;
};

struct EnsembleOptions {
  bool doubling = false;
  bool vanishing = false;
};

/// One sweep point and run: draw coefficients and initial data, solve from t0
/// to 0, pick the start point at -eps, and collect the requested diagnostics.
EnsembleMember run_member(const ExperimentConfig& cfg, std::size_t point_index, int run,
                          const EnsembleOptions& opts);

/// All members in deterministic (point, run) order; points may run concurrently.
std::vector<EnsembleMember> run_ensemble(const ExperimentConfig& cfg, const EnsembleOptions& opts);

struct BoundednessSummary {
  double c_fit = 0.0;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  /// max / min of sup Q-bar / (M0^a + M1^b)
  double spread = 0.0;
  double min_margin = 0.0;
  bool pass = false;
};

inline constexpr double kSpreadLimit = 10.0;

BoundednessSummary summarize_boundedness(const std::vector<EnsembleMember>& members);

RunRecord run_experiment(const ExperimentConfig& cfg);

/// Writes results.csv, summary.csv (when present), meta.txt and, with plots, *.svg.
void write_record(const RunRecord& record, const ExperimentConfig& cfg, const std::filesystem::path& out,
                  bool plots);

std::string render_svg(const Plot& plot);

}  // namespace uclab

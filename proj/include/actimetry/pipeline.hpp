#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "actimetry/circadian.hpp"
#include "actimetry/config.hpp"
#include "actimetry/dfa.hpp"
#include "actimetry/group_stats.hpp"
#include "actimetry/series.hpp"
#include "actimetry/spectral.hpp"

namespace actimetry {

enum class RecordingStatus { Ok, Partial, Failed };
std::string_view status_name(RecordingStatus s);

/// Everything computed for one recording. A metric that fails is left empty
/// and explained in `errors`; a failure before metrics start marks the
/// recording Failed.
struct RecordingResult {
  std::string source;
  std::string subject_id;
  Group group;
  RecordingStatus status = RecordingStatus::Ok;
  std::vector<std::string> errors;
  std::vector<std::string> warnings;

  std::size_t n_samples = 0;
  Provenance provenance;
  MetricRow row;

  std::optional<IsResult> is;
  std::optional<IvResult> iv;
  IvSweep sweep;
  std::optional<DfaFit> dfa;
  std::optional<DfaFit> dfa_day;
  std::optional<DfaFit> dfa_night;
  std::optional<PovResult> pov;
  std::optional<CosinorFit> cosinor;
  std::optional<DailyProfile> profile;
  std::vector<double> spectrum_frequencies;  // truncated at spectrum_max_hz
  std::vector<double> spectrum_density;

  double seconds = 0.0;  // wall time; reported separately from results
};

/// Exclusion, then every metric. Never throws for data problems.
RecordingResult analyze_recording(const Recording& recording, const RunConfig& config, std::size_t workers = 1);

struct GroupTest {
  std::string group_a;
  std::string group_b;
  std::string metric;  // metric name, or "alpha_day-vs-alpha_night"
  std::optional<UTestResult> result;
  std::string error;
};

struct GroupProfile {
  std::string group;
  double bin_width = 300.0;
  std::vector<double> means;  // mean over recordings of each recording's bin mean
  std::vector<std::size_t> recordings;
};

struct CohortAnalysis {
  MetricTable table;
  std::vector<MetricSummary> summaries;
  std::vector<GroupTest> tests;
  std::vector<CorrelationMatrix> correlations;
  std::vector<std::string> correlation_omissions;
  SweepCorrelations sweep_correlations;
  std::vector<GroupProfile> profiles;
};

/// Cohort statistics over recordings that produced metrics. Rows must have
/// distinct subject ids.
CohortAnalysis analyze_cohort(const std::vector<RecordingResult>& results, const RunConfig& config);

/// The metrics used for correlation matrices.
std::vector<Metric> correlation_metrics();

/// *.csv files of each directory input (sorted) and every file input.
std::vector<std::filesystem::path> discover_inputs(const std::vector<std::string>& inputs);

/// Runs the full pipeline and writes all artifacts into config.output_dir.
/// Returns 0 when every recording succeeded, 1 when some failed or lost a
/// metric, 2 when nothing could be analyzed.
int run_pipeline(const RunConfig& config, std::ostream& log);

}  // namespace actimetry

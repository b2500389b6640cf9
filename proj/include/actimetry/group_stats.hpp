#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "actimetry/series.hpp"

namespace actimetry {

enum class Metric { IS, IV, AlphaOverall, AlphaDay, AlphaNight, PovF, PovH, CosinorR2 };
inline constexpr std::size_t kMetricCount = 8;
inline constexpr std::array<Metric, kMetricCount> kAllMetrics = {
    Metric::IS,        Metric::IV,   Metric::AlphaOverall, Metric::AlphaDay,
    Metric::AlphaNight, Metric::PovF, Metric::PovH,         Metric::CosinorR2};

std::string_view metric_name(Metric m);
std::string_view metric_unit(Metric m);
/// Inverse of metric_name; throws InvalidParameter.
Metric parse_metric(std::string_view name);

struct MetricRow {
  std::string subject_id;
  Group group;
  std::array<std::optional<double>, kMetricCount> values{};

  [[nodiscard]] std::optional<double> get(Metric m) const { return values[static_cast<std::size_t>(m)]; }
  void set(Metric m, std::optional<double> v) { values[static_cast<std::size_t>(m)] = v; }
};

/// One row per recording, keyed by subject id.
class MetricTable {
 public:
  MetricTable() = default;
  explicit MetricTable(std::string config_hash) : config_hash_(std::move(config_hash)) {}

  /// Throws InvalidParameter on a duplicate subject id.
  void add(MetricRow row);
  [[nodiscard]] const std::vector<MetricRow>& rows() const { return rows_; }
  [[nodiscard]] std::vector<MetricRow>& mutable_rows() { return rows_; }
  [[nodiscard]] std::size_t size() const { return rows_.size(); }
  [[nodiscard]] bool empty() const { return rows_.empty(); }
  [[nodiscard]] const std::string& config_hash() const { return config_hash_; }

 private:
  std::vector<MetricRow> rows_;
  std::string config_hash_;
};

enum class Alternative { TwoSided, Greater, Less };
enum class UTestMethod { Exact, NormalApprox };

std::string_view alternative_name(Alternative a);
std::string_view method_name(UTestMethod m);

struct UTestResult {
  double u_statistic = 0.0;  // U for the first sample
  double p_value = 1.0;
  UTestMethod method = UTestMethod::Exact;
  std::size_t n1 = 0;
  std::size_t n2 = 0;
  Alternative alternative = Alternative::TwoSided;
};

/// U counts pairs with a > b (ties count one half). `Greater` tests whether
/// `a` tends to be larger. Exact null distribution when n1*n2 <= 400 and
/// there are no ties, otherwise the normal approximation with tie and
/// continuity corrections.
UTestResult mann_whitney_u(std::span<const double> a, std::span<const double> b,
                           Alternative alternative = Alternative::TwoSided);

/// Exact null probability P(U = u) for sample sizes n1, n2 without ties.
std::vector<double> mann_whitney_null_distribution(std::size_t n1, std::size_t n2);

/// Sample Pearson correlation. Needs equal lengths >= 3 and non-constant inputs.
double pearson(std::span<const double> x, std::span<const double> y);

struct MetricSummary {
  std::string group;
  Metric metric = Metric::IS;
  std::size_t n = 0;
  double mean = 0.0;
  std::optional<double> sd;  // sample SD; undefined for n = 1
  double min = 0.0;
  double max = 0.0;
};

/// Display order for group names: non-intervention, intervention, dementia,
/// without-dementia, then any other label alphabetically.
bool group_name_less(const std::string& a, const std::string& b);

/// Per group and metric: mean, sample SD, min and max over rows where the
/// metric is present. Adds the pooled "dementia" group (non-intervention plus
/// intervention) whenever either is present.
std::vector<MetricSummary> summarize(const MetricTable& table);

/// Selects rows by group.
struct RowFilter {
  enum class Kind { All, Dementia, Exact } kind = Kind::All;
  Group group;

  static RowFilter all() { return {}; }
  static RowFilter dementia() { return {Kind::Dementia, {}}; }
  static RowFilter exact(Group g) { return {Kind::Exact, std::move(g)}; }

  [[nodiscard]] bool accepts(const Group& g) const;
  [[nodiscard]] std::string name() const;
};

struct CorrelationMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> values;
  std::size_t n_rows = 0;
  std::string filter;
};

/// Pairwise Pearson correlations over rows passing the filter that have every
/// selected metric. Throws EmptyData with fewer than three such rows.
CorrelationMatrix metric_correlations(const MetricTable& table, std::span<const Metric> metrics,
                                      const RowFilter& filter = RowFilter::all());

struct SweepCorrelationPoint {
  std::size_t delta = 0;
  std::string filter;
  Metric metric = Metric::IS;
  double r = 0.0;
};

struct SweepCorrelationOmission {
  std::size_t delta = 0;
  std::string filter;
  Metric metric = Metric::IS;
  std::string reason;
};

struct SweepCorrelations {
  std::vector<SweepCorrelationPoint> points;
  std::vector<SweepCorrelationOmission> omitted;
};

struct DeltaTable {
  std::size_t delta = 0;
  MetricTable table;  // IV column holds IV at this delta
};

/// For each delta, Pearson r between IV and each of IS, alpha and PoV_H,
/// overall and within every group present. Failing points are omitted.
SweepCorrelations iv_sweep_correlations(std::span<const DeltaTable> tables);

}  // namespace actimetry

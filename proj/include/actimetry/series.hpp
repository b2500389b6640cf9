#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "actimetry/time.hpp"

namespace actimetry {

enum class GroupKind { NonIntervention, Intervention, WithoutDementia, Other };

/// Participant group. `Other` carries a free-form label.
struct Group {
  GroupKind kind = GroupKind::Other;
  std::string label;  // only meaningful for Other

  static Group non_intervention() { return {GroupKind::NonIntervention, {}}; }
  static Group intervention() { return {GroupKind::Intervention, {}}; }
  static Group without_dementia() { return {GroupKind::WithoutDementia, {}}; }
  static Group other(std::string label) { return {GroupKind::Other, std::move(label)}; }

  /// Accepts "non-intervention", "intervention", "without-dementia" (and the
  /// underscore spellings); anything else becomes Other(text).
  static Group parse(std::string_view text);

  [[nodiscard]] std::string name() const;
  [[nodiscard]] bool has_dementia() const {
    return kind == GroupKind::NonIntervention || kind == GroupKind::Intervention;
  }
  friend bool operator==(const Group&, const Group&) = default;
};

struct Triaxial {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// Half-open range of missing sample indices on the regular grid.
struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  [[nodiscard]] std::size_t size() const { return end - begin; }
  friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

/// ENMO = max(|(x,y,z)| - 1, 0). Inputs must be finite and nonnegative.
double compute_enmo(double x, double y, double z);
inline double compute_enmo(const Triaxial& s) { return compute_enmo(s.x, s.y, s.z); }

/// Where an exclusion step dropped and joined data.
struct Provenance {
  std::vector<std::int64_t> retained_days;  // local day numbers
  std::vector<std::int64_t> dropped_days;
  std::vector<std::size_t> splices;  // sample index where a new contiguous run starts
};

/// Uniformly sampled ENMO series. Immutable; mean and population variance are
/// computed once at construction.
class EnmoSeries {
 public:
  EnmoSeries() = default;
  EnmoSeries(std::vector<double> values, Timestamp start, double sample_interval,
             std::vector<std::size_t> splices = {});

  [[nodiscard]] std::span<const double> values() const { return values_; }
  [[nodiscard]] std::size_t size() const { return values_.size(); }
  [[nodiscard]] bool empty() const { return values_.empty(); }
  [[nodiscard]] const Timestamp& start_time() const { return start_; }
  [[nodiscard]] double sample_interval() const { return interval_; }
  [[nodiscard]] double mean() const { return mean_; }
  [[nodiscard]] double population_variance() const { return variance_; }
  [[nodiscard]] const std::vector<std::size_t>& splices() const { return splices_; }
  [[nodiscard]] double duration_seconds() const { return static_cast<double>(size()) * interval_; }

  /// Local clock seconds of sample t (start + t * interval).
  [[nodiscard]] double local_seconds_at(std::size_t t) const {
    return start_.local_seconds() + static_cast<double>(t) * interval_;
  }

 private:
  std::vector<double> values_;
  Timestamp start_{};
  double interval_ = 1.0;
  double mean_ = 0.0;
  double variance_ = 0.0;
  std::vector<std::size_t> splices_;
};

/// A recording on a regular sampling grid. Triaxial input is converted to ENMO
/// on construction; positions inside `gaps` hold placeholder zeros.
class Recording {
 public:
  Recording(std::string subject_id, Group group, Timestamp start, double sample_interval,
            std::vector<double> enmo, std::vector<IndexRange> gaps = {});

  static Recording from_triaxial(std::string subject_id, Group group, Timestamp start,
                                 double sample_interval, std::span<const Triaxial> samples,
                                 std::vector<IndexRange> gaps = {});

  [[nodiscard]] const std::string& subject_id() const { return subject_id_; }
  [[nodiscard]] const Group& group() const { return group_; }
  [[nodiscard]] const Timestamp& start_time() const { return start_; }
  [[nodiscard]] double sample_interval() const { return interval_; }
  [[nodiscard]] std::span<const double> enmo() const { return enmo_; }
  [[nodiscard]] std::size_t size() const { return enmo_.size(); }
  [[nodiscard]] const std::vector<IndexRange>& gaps() const { return gaps_; }
  [[nodiscard]] const Provenance& provenance() const { return provenance_; }
  [[nodiscard]] const std::vector<std::string>& warnings() const { return warnings_; }

  Recording& add_warning(std::string w) {
    warnings_.push_back(std::move(w));
    return *this;
  }

  /// The ENMO series; fails with InputError while gaps remain.
  [[nodiscard]] EnmoSeries to_series() const;

 private:
  friend Recording exclude_missing_days(const Recording& recording);

  std::string subject_id_;
  Group group_;
  Timestamp start_;
  double interval_;
  std::vector<double> enmo_;
  std::vector<IndexRange> gaps_;
  Provenance provenance_;
  std::vector<std::string> warnings_;
};

/// Keeps every complete local calendar day (midnight to midnight) that no gap
/// touches and concatenates them. Throws EmptyData if none survive.
Recording exclude_missing_days(const Recording& recording);

/// Y_k = X[(k-1)*delta + offset], k = 1..floor(N/delta). `offset` is 1-based.
EnmoSeries subsample(const EnmoSeries& series, std::size_t delta, std::size_t offset);

struct DayNightSchedule {
  double night_start_hour = 23.0;
  double night_end_hour = 6.0;

  /// Validates both hours lie in [0, 24) and differ.
  void validate() const;
  /// Night is [night_start, night_end) modulo midnight.
  [[nodiscard]] bool is_night(double seconds_of_day) const;
};

struct DayNightSplit {
  EnmoSeries day;
  EnmoSeries night;
  std::vector<std::string> warnings;
};

DayNightSplit split_day_night(const EnmoSeries& series, const DayNightSchedule& schedule = {});

struct DailyProfile {
  double bin_width = 3600.0;
  std::vector<double> means;        // NaN where count == 0
  std::vector<std::size_t> counts;

  [[nodiscard]] bool is_empty_bin(std::size_t b) const { return counts[b] == 0; }
};

/// Mean ENMO per time-of-day bin, pooled across days.
DailyProfile daily_profile(const EnmoSeries& series, double bin_width_seconds);

/// Number of samples in one local day; throws InvalidParameter unless the
/// interval divides 86400 s.
std::size_t samples_per_day(double sample_interval);

}  // namespace actimetry

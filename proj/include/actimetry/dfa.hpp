#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "actimetry/series.hpp"

namespace actimetry {

/// Scale schedule for DFA. Scales are round(2^i) over the exponent list,
/// deduplicated and ascending. Detrending is always first order.
class DfaConfig {
 public:
  /// Exponents 4.0, 4.25, ..., 8.0.
  DfaConfig();
  explicit DfaConfig(std::vector<double> scale_exponents);
  static DfaConfig from_range(double min_exponent, double max_exponent, double step);

  [[nodiscard]] const std::vector<double>& scale_exponents() const { return exponents_; }
  [[nodiscard]] const std::vector<std::size_t>& scales() const { return scales_; }

 private:
  std::vector<double> exponents_;
  std::vector<std::size_t> scales_;
};

struct DfaFit {
  std::vector<std::size_t> scales;
  std::vector<double> fluctuations;
  double alpha = 0.0;
  double intercept = 0.0;  // log2 units
  double r_squared = 0.0;
  std::vector<std::string> warnings;
};

/// Z_t = sum_{u<=t} (X_u - mean).
std::vector<double> dfa_profile(std::span<const double> values);

/// Root mean square of per-segment least-squares residuals at scale S over the
/// first S*floor(N/S) profile points. Requires 2 <= S <= N.
double fluctuation(std::span<const double> profile, std::size_t scale);

/// Unweighted least-squares slope of log2 F(S) against log2 S. Scales above
/// N/2 are skipped with a warning; fewer than three usable scales is an error.
DfaFit dfa_alpha(std::span<const double> values, const DfaConfig& config = {}, std::size_t workers = 1);
inline DfaFit dfa_alpha(const EnmoSeries& series, const DfaConfig& config = {}, std::size_t workers = 1) {
  return dfa_alpha(series.values(), config, workers);
}

struct DayNightDfa {
  DfaFit day;
  DfaFit night;
};

/// Splits by clock time and fits each partition independently; the profile is
/// recomputed on each concatenated partition. Errors are prefixed with
/// "daytime:" or "nighttime:".
DayNightDfa dfa_day_night(const EnmoSeries& series, const DayNightSchedule& schedule = {},
                          const DfaConfig& config = {}, std::size_t workers = 1);

}  // namespace actimetry

#include "actimetry/circadian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>

#include "actimetry/errors.hpp"
#include "parallel.hpp"

namespace actimetry {

IsResult interdaily_stability(const EnmoSeries& series, double bin_seconds) {
  if (series.duration_seconds() < kSecondsPerDay - 1e-6) {
    throw DurationError("interdaily_stability: series must span at least one full day");
  }
  if (!(series.population_variance() > 0)) {
    throw DegenerateSeries("interdaily_stability: series has zero variance");
  }
  const DailyProfile profile = daily_profile(series, bin_seconds);
  for (std::size_t b = 0; b < profile.means.size(); ++b) {
    if (profile.is_empty_bin(b)) {
      throw InputError("interdaily_stability: time-of-day bin " + std::to_string(b) + " has no samples");
    }
  }
  const double mean = series.mean();
  double between = 0.0;
  for (double m : profile.means) between += (m - mean) * (m - mean);
  between /= static_cast<double>(profile.means.size());

  IsResult r;
  r.is_value = between / series.population_variance();
  r.hourly_means = profile.means;
  r.overall_mean = mean;
  r.n_samples = series.size();
  return r;
}

namespace {

// IV of the subseries values[offset], values[offset+delta], ... (m points);
// nullopt when the subseries is constant.
std::optional<double> iv_for_offset(std::span<const double> values, std::size_t delta, std::size_t offset,
                                    std::size_t m) {
  double sum = 0.0;
  double lo = values[offset];
  double hi = lo;
  for (std::size_t k = 0; k < m; ++k) {
    const double y = values[offset + k * delta];
    sum += y;
    lo = std::min(lo, y);
    hi = std::max(hi, y);
  }
  if (lo == hi) return std::nullopt;
  const double mean = sum / static_cast<double>(m);
  double ss = 0.0;
  double diff_ss = 0.0;
  double prev = values[offset];
  for (std::size_t k = 0; k < m; ++k) {
    const double y = values[offset + k * delta];
    ss += (y - mean) * (y - mean);
    if (k > 0) diff_ss += (y - prev) * (y - prev);
    prev = y;
  }
  const double numerator = diff_ss / static_cast<double>(m - 1);
  const double denominator = ss / static_cast<double>(m);
  return numerator / denominator;
}

}  // namespace

IvResult intradaily_variability(std::span<const double> values, std::size_t delta) {
  if (delta < 1) throw InvalidParameter("intradaily_variability: delta must be >= 1");
  const std::size_t m = values.size() / delta;
  if (m < 2) {
    throw InvalidParameter("intradaily_variability: floor(N/delta) must be >= 2 (N=" +
                           std::to_string(values.size()) + ", delta=" + std::to_string(delta) + ")");
  }
  IvResult r;
  r.delta = delta;
  r.m = m;
  r.per_offset.resize(delta);
  double total = 0.0;
  std::size_t defined = 0;
  for (std::size_t j = 0; j < delta; ++j) {
    if (auto iv = iv_for_offset(values, delta, j, m)) {
      r.per_offset[j] = *iv;
      total += *iv;
      ++defined;
    } else {
      r.per_offset[j] = std::numeric_limits<double>::quiet_NaN();
      ++r.degenerate_offsets;
    }
  }
  if (defined == 0) {
    throw DegenerateSeries("intradaily_variability: every subsampled series is constant at delta=" +
                           std::to_string(delta));
  }
  r.iv_value = total / static_cast<double>(defined);
  return r;
}

std::vector<std::size_t> default_sweep_deltas(std::size_t max_delta) {
  std::vector<std::size_t> d(max_delta);
  for (std::size_t i = 0; i < max_delta; ++i) d[i] = i + 1;
  return d;
}

IvSweep iv_sweep(std::span<const double> values, double sample_interval, std::span<const std::size_t> deltas,
                 std::size_t workers) {
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (deltas[i] < 1 || (i > 0 && deltas[i] <= deltas[i - 1])) {
      throw InvalidParameter("iv_sweep: deltas must be positive and strictly increasing");
    }
  }
  std::vector<std::optional<double>> results(deltas.size());
  std::vector<std::string> reasons(deltas.size());
  detail::parallel_for(deltas.size(), workers, [&](std::size_t i) {
    try {
      results[i] = intradaily_variability(values, deltas[i]).iv_value;
    } catch (const Error& e) {
      reasons[i] = e.what();
    }
  });

  IvSweep sweep;
  sweep.sample_interval = sample_interval;
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (results[i]) {
      sweep.deltas.push_back(deltas[i]);
      sweep.iv_values.push_back(*results[i]);
    } else {
      sweep.omitted.push_back({deltas[i], reasons[i]});
    }
  }
  return sweep;
}

}  // namespace actimetry

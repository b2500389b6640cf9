#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "actimetry/series.hpp"

namespace actimetry {

struct IsResult {
  double is_value = 0.0;
  std::vector<double> hourly_means;  // one per bin; 24 with the default binning
  double overall_mean = 0.0;
  std::size_t n_samples = 0;
};

/// Interdaily stability: variance of the clock-hour means (pooled across days)
/// over the population variance of the series.
///
/// `bin_seconds` other than 3600 is experimental; hourly binning is the
/// reference definition. Requires at least one full day of data and a
/// non-constant series.
IsResult interdaily_stability(const EnmoSeries& series, double bin_seconds = 3600.0);

struct IvResult {
  std::size_t delta = 1;
  std::vector<double> per_offset;  // NaN for offsets whose subseries is constant
  double iv_value = 0.0;
  std::size_t m = 0;
  std::size_t degenerate_offsets = 0;
};

/// Intradaily variability at subsampling factor `delta`, averaged over all
/// `delta` start offsets so every sample up to delta*floor(N/delta) is used.
/// Offsets whose subseries is constant are left out of the average.
IvResult intradaily_variability(std::span<const double> values, std::size_t delta);
inline IvResult intradaily_variability(const EnmoSeries& series, std::size_t delta) {
  return intradaily_variability(series.values(), delta);
}

struct IvSweepOmission {
  std::size_t delta = 0;
  std::string reason;
};

struct IvSweep {
  std::vector<std::size_t> deltas;
  std::vector<double> iv_values;
  double sample_interval = 5.0;
  std::vector<IvSweepOmission> omitted;
};

/// 1, 2, ..., max_delta.
std::vector<std::size_t> default_sweep_deltas(std::size_t max_delta = 720);

/// IV for each delta (strictly increasing). Failing deltas are reported in
/// `omitted` instead of aborting the sweep.
IvSweep iv_sweep(std::span<const double> values, double sample_interval, std::span<const std::size_t> deltas,
                 std::size_t workers = 1);
inline IvSweep iv_sweep(const EnmoSeries& series, std::span<const std::size_t> deltas, std::size_t workers = 1) {
  return iv_sweep(series.values(), series.sample_interval(), deltas, workers);
}

}  // namespace actimetry

#pragma once

#include <cstdint>
#include <istream>
#include <string>
#include <vector>

#include "actimetry/dfa.hpp"
#include "actimetry/series.hpp"
#include "actimetry/spectral.hpp"

namespace actimetry {

/// Every tunable of a pipeline run. Defaults are the reference settings.
struct RunConfig {
  std::vector<std::string> inputs;  // files or directories of *.csv
  std::string output_dir = "actimetry-out";
  std::size_t iv_delta = 60;  // 5 min at 5 s sampling
  std::size_t iv_sweep_min = 1;
  std::size_t iv_sweep_max = 720;
  double dfa_exponent_min = 4.0;
  double dfa_exponent_max = 8.0;
  double dfa_exponent_step = 0.25;
  double night_start_hour = 23.0;
  double night_end_hour = 6.0;
  int pov_k_max = 4;
  double band_lo_hz = kCircadianBandLowHz;
  double band_hi_hz = kCircadianBandHighHz;
  std::size_t zero_pad_factor = 0;  // 0 selects the smallest factor meeting pad_resolution
  double pad_resolution = 16.0;
  double is_bin_seconds = 3600.0;
  double profile_bin_seconds = 300.0;
  double spectrum_max_hz = 5.0 / 86400.0;
  std::size_t workers = 0;  // 0: hardware concurrency
  std::uint64_t seed = 1;

  /// Throws InvalidParameter describing the first bad field.
  void validate() const;

  [[nodiscard]] DfaConfig dfa_config() const;
  [[nodiscard]] DayNightSchedule schedule() const;
  [[nodiscard]] PovOptions pov_options() const;
  [[nodiscard]] std::vector<std::size_t> sweep_deltas() const;
};

/// Every key accepted by apply_setting, in serialization order.
const std::vector<std::string>& setting_keys();

/// Applies one `key=value` assignment. Unknown keys throw InvalidParameter.
void apply_setting(RunConfig& config, const std::string& key, const std::string& value);

/// Flat `key=value` text; `#` comments and blank lines allowed. `inputs` may
/// repeat and accumulates.
RunConfig parse_config(std::istream& in, RunConfig base = {});
RunConfig load_config(const std::string& path, RunConfig base = {});

/// Canonical text of every field in a fixed order (numbers at full precision).
std::string serialize(const RunConfig& config);

/// FNV-1a 64 over the analysis fields of `serialize` (inputs, output_dir and
/// workers excluded), as 16 hex digits.
std::string config_hash(const RunConfig& config);

}  // namespace actimetry

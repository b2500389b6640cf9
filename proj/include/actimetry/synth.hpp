#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <random>
#include <string>
#include <vector>

#include "actimetry/series.hpp"

namespace actimetry {

using Rng = std::mt19937_64;

std::vector<double> white_noise(std::size_t n, double sd, Rng& rng);
/// Stationary AR(1) with marginal standard deviation `sd`.
std::vector<double> ar1_noise(std::size_t n, double phi, double sd, Rng& rng);
/// Gaussian noise with power spectrum proportional to 1/f^exponent, built by
/// spectral synthesis and scaled to standard deviation `sd`.
std::vector<double> power_law_noise(std::size_t n, double exponent, double sd, Rng& rng);
inline std::vector<double> pink_noise(std::size_t n, double sd, Rng& rng) { return power_law_noise(n, 1.0, sd, rng); }
/// Cumulative sum of unit-variance white noise scaled by `sd`.
std::vector<double> random_walk(std::size_t n, double sd, Rng& rng);

enum class Waveform { None, Sine, Square, Activity };
enum class NoiseModel { None, Iid, Ar1, Pink };

/// Value in [-1, 1] at a given time of day. Sine is cos(2 pi (tau - phase)/day);
/// Square is +1 for the 12 h starting at `phase_hours`, -1 otherwise; Activity
/// is a smoothed wake plateau (+1 from 07:00 to 23:00, -1 at night).
double waveform_value(Waveform w, double seconds_of_day, double phase_hours = 0.0);

struct GroupRecipe {
  Group group = Group::other("synthetic");
  std::size_t count = 1;
  std::string id_prefix;  // defaults to the group name
  Waveform waveform = Waveform::Sine;
  double amplitude = 1.0;
  double amplitude_jitter = 0.0;  // relative, uniform in [1 - j, 1 + j]
  double phase_hours = 0.0;
  double baseline = 1.0;
  NoiseModel noise = NoiseModel::None;
  double noise_sd = 0.0;
  double noise_sd_jitter = 0.0;  // relative
  double ar_coef = 0.0;
  double white_sd = 0.0;  // extra IID component added on top of `noise`
};

struct CohortRecipe {
  std::vector<GroupRecipe> groups;
  double days = 14.0;
  double sample_interval = 5.0;
  std::uint64_t seed = 1;
  Timestamp start{1704067200.0, 0};  // 2024-01-01T00:00:00+00:00
};

/// Named fixtures: pure-sine, square, white-noise, pink-noise, cohort.
/// Throws InvalidParameter for an unknown name.
CohortRecipe preset_recipe(const std::string& name);

/// Text form: global `key=value` lines (days, sample_interval, seed, start)
/// and one `group key=value ...` line per group. `#` starts a comment.
CohortRecipe parse_recipe(std::istream& in);

/// Validates the recipe; throws InvalidParameter.
void validate(const CohortRecipe& recipe);

/// One gap-free recording per subject. Values are clamped at zero. Each
/// subject's stream is seeded from (seed, group index, subject index), so the
/// output is deterministic and independent of generation order.
std::vector<Recording> synthesize(const CohortRecipe& recipe);

}  // namespace actimetry

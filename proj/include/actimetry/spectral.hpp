#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "actimetry/series.hpp"

namespace actimetry {

inline constexpr double kCircadianBandLowHz = 1.0 / 88200.0;   // 1/24.5 h
inline constexpr double kCircadianBandHighHz = 1.0 / 84600.0;  // 1/23.5 h

/// Periodogram of the mean-centred series on a zero-padded grid of
/// n_samples * zero_pad_factor frequencies.
///
/// Ordinates are a spectral density in g^2 s: I(f) = dt * |sum_t x_t e^{-2 pi i f t dt}|^2 / N.
/// Only the non-negative half of the grid is stored; index i holds the
/// frequency i * grid_spacing, so index 0 is DC and the last index is the
/// highest frequency at or below Nyquist. With this scaling the sum of
/// I(f) * grid_spacing over the full two-sided grid is the population variance.
class SpectralEstimate {
 public:
  SpectralEstimate(std::vector<double> ordinates, double sample_interval, std::size_t n_samples,
                   std::size_t zero_pad_factor, double population_variance);

  [[nodiscard]] std::span<const double> ordinates() const { return ordinates_; }
  [[nodiscard]] double frequency(std::size_t i) const { return static_cast<double>(i) * grid_spacing_; }
  [[nodiscard]] std::vector<double> frequencies() const;
  [[nodiscard]] double grid_spacing() const { return grid_spacing_; }
  [[nodiscard]] double nyquist() const { return 0.5 / sample_interval_; }
  [[nodiscard]] double sample_interval() const { return sample_interval_; }
  [[nodiscard]] std::size_t n_samples() const { return n_samples_; }
  [[nodiscard]] std::size_t fft_length() const { return n_samples_ * zero_pad_factor_; }
  [[nodiscard]] std::size_t zero_pad_factor() const { return zero_pad_factor_; }
  [[nodiscard]] double total_population_variance() const { return variance_; }

  /// Riemann sum of the density over the full two-sided grid.
  [[nodiscard]] double two_sided_integral() const;

 private:
  std::vector<double> ordinates_;
  double sample_interval_;
  std::size_t n_samples_;
  std::size_t zero_pad_factor_;
  double grid_spacing_;
  double variance_;
};

SpectralEstimate periodogram(std::span<const double> values, double sample_interval, std::size_t zero_pad_factor = 1);
inline SpectralEstimate periodogram(const EnmoSeries& series, std::size_t zero_pad_factor = 1) {
  return periodogram(series.values(), series.sample_interval(), zero_pad_factor);
}

struct HarmonicBand {
  int k = 1;
  double f_lo = kCircadianBandLowHz;
  double f_hi = kCircadianBandHighHz;
};

/// [k * base_lo, k * base_hi].
HarmonicBand harmonic_band(int k, double base_lo_hz = kCircadianBandLowHz, double base_hi_hz = kCircadianBandHighHz);

/// Trapezoidal integral of the ordinates over [f_lo, f_hi], with the end
/// points linearly interpolated from the neighbouring grid values.
double band_power(const SpectralEstimate& estimate, const HarmonicBand& band);

/// Smallest padding factor that makes the grid spacing at most
/// (base_hi - base_lo) / resolution.
std::size_t minimum_zero_pad_factor(std::size_t n_samples, double sample_interval,
                                    double base_lo_hz = kCircadianBandLowHz,
                                    double base_hi_hz = kCircadianBandHighHz, double resolution = 16.0);

struct PovOptions {
  int k_max = 4;
  double band_lo_hz = kCircadianBandLowHz;
  double band_hi_hz = kCircadianBandHighHz;
  std::size_t zero_pad_factor = 0;  // 0: use minimum_zero_pad_factor
  double resolution = 16.0;
};

struct PovResult {
  double pov_fundamental = 0.0;
  double pov_harmonic = 0.0;
  std::vector<double> per_band;  // one-sided band power / variance, k = 1..k_max
  int k_max = 4;
  std::size_t zero_pad_factor = 1;
};

/// Proportion of variance in the circadian band (fundamental) and in the
/// first k_max harmonic bands. Negative frequencies are folded in by the
/// factor two; the denominator is the population variance.
PovResult pov(const SpectralEstimate& estimate, const PovOptions& options = {});
PovResult pov(const EnmoSeries& series, const PovOptions& options = {});

struct CosinorFit {
  double period_hours = 24.0;
  double mesor = 0.0;
  double amplitude = 0.0;
  double acrophase = 0.0;  // radians in [0, 2 pi), referenced to local midnight
  double r_squared = 0.0;
};

/// Least-squares fit of x(t) = M + A cos(2 pi tau / 86400 + phi), with tau the
/// local clock time in seconds since the midnight preceding the first sample.
CosinorFit cosinor(std::span<const double> values, double sample_interval, double first_seconds_of_day = 0.0);
CosinorFit cosinor(const EnmoSeries& series);

}  // namespace actimetry

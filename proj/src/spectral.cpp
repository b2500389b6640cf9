#include "actimetry/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "actimetry/errors.hpp"
#include "fft.hpp"

namespace actimetry {

SpectralEstimate::SpectralEstimate(std::vector<double> ordinates, double sample_interval, std::size_t n_samples,
                                   std::size_t zero_pad_factor, double population_variance)
    : ordinates_(std::move(ordinates)),
      sample_interval_(sample_interval),
      n_samples_(n_samples),
      zero_pad_factor_(zero_pad_factor),
      grid_spacing_(1.0 / (static_cast<double>(n_samples * zero_pad_factor) * sample_interval)),
      variance_(population_variance) {
  if (ordinates_.size() != fft_length() / 2 + 1) {
    throw InternalError("SpectralEstimate: ordinate count does not match grid");
  }
}

std::vector<double> SpectralEstimate::frequencies() const {
  std::vector<double> f(ordinates_.size());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = frequency(i);
  return f;
}

double SpectralEstimate::two_sided_integral() const {
  const std::size_t length = fft_length();
  // Bins 1..ceil(L/2)-1 appear twice (positive and negative); DC once; the
  // Nyquist bin once when L is even.
  double sum = ordinates_.front();
  const std::size_t last = ordinates_.size() - 1;
  for (std::size_t i = 1; i < ordinates_.size(); ++i) {
    const bool nyquist_bin = (length % 2 == 0) && i == last;
    sum += nyquist_bin ? ordinates_[i] : 2.0 * ordinates_[i];
  }
  return sum * grid_spacing_;
}

SpectralEstimate periodogram(std::span<const double> values, double sample_interval, std::size_t zero_pad_factor) {
  const std::size_t n = values.size();
  if (n < 16) throw InvalidParameter("periodogram: need at least 16 samples");
  if (zero_pad_factor < 1) throw InvalidParameter("periodogram: zero_pad_factor must be >= 1");
  if (!(sample_interval > 0)) throw InvalidParameter("periodogram: sample_interval must be positive");

  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
  std::vector<double> centred(n);
  double ss = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    centred[t] = values[t] - mean;
    ss += centred[t] * centred[t];
  }
  const double variance = ss / static_cast<double>(n);
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (!(variance > 0) || *lo == *hi) throw DegenerateSeries("periodogram: series has zero variance");

  const std::size_t length = n * zero_pad_factor;
  const auto coeffs = detail::real_forward_fft(centred, length);
  std::vector<double> ordinates(coeffs.size());
  const double scale = sample_interval / static_cast<double>(n);
  for (std::size_t k = 0; k < coeffs.size(); ++k) ordinates[k] = scale * std::norm(coeffs[k]);
  return SpectralEstimate(std::move(ordinates), sample_interval, n, zero_pad_factor, variance);
}

HarmonicBand harmonic_band(int k, double base_lo_hz, double base_hi_hz) {
  if (k < 1) throw InvalidParameter("harmonic_band: k must be >= 1");
  if (!(base_lo_hz > 0) || !(base_hi_hz > base_lo_hz)) {
    throw InvalidParameter("harmonic_band: need 0 < f_lo < f_hi");
  }
  return HarmonicBand{k, k * base_lo_hz, k * base_hi_hz};
}

double band_power(const SpectralEstimate& estimate, const HarmonicBand& band) {
  if (!(band.f_lo > 0) || !(band.f_hi > band.f_lo)) throw InvalidParameter("band_power: need 0 < f_lo < f_hi");
  const auto ord = estimate.ordinates();
  const double df = estimate.grid_spacing();
  const double f_top = estimate.frequency(ord.size() - 1);
  if (band.f_hi > f_top * (1 + 1e-12)) {
    throw InvalidParameter("band_power: band upper edge " + std::to_string(band.f_hi) +
                           " Hz exceeds the highest grid frequency");
  }
  auto value_at = [&](double f) {
    const double pos = f / df;
    auto i = static_cast<std::size_t>(std::floor(pos));
    if (i >= ord.size() - 1) return ord.back();
    const double w = pos - static_cast<double>(i);
    return ord[i] + w * (ord[i + 1] - ord[i]);
  };

  // Grid points strictly inside the band.
  const auto first = static_cast<std::size_t>(std::floor(band.f_lo / df)) + 1;
  auto last = static_cast<std::size_t>(std::ceil(band.f_hi / df));
  last = last == 0 ? 0 : last - 1;

  double prev_f = band.f_lo;
  double prev_v = value_at(band.f_lo);
  double area = 0.0;
  for (std::size_t i = first; i <= last && i < ord.size(); ++i) {
    const double f = estimate.frequency(i);
    if (f <= band.f_lo || f >= band.f_hi) continue;
    area += 0.5 * (prev_v + ord[i]) * (f - prev_f);
    prev_f = f;
    prev_v = ord[i];
  }
  area += 0.5 * (prev_v + value_at(band.f_hi)) * (band.f_hi - prev_f);
  return area;
}

std::size_t minimum_zero_pad_factor(std::size_t n_samples, double sample_interval, double base_lo_hz,
                                    double base_hi_hz, double resolution) {
  if (n_samples == 0 || !(sample_interval > 0) || !(resolution > 0) || !(base_hi_hz > base_lo_hz)) {
    throw InvalidParameter("minimum_zero_pad_factor: invalid arguments");
  }
  const double width = base_hi_hz - base_lo_hz;
  const double needed_length = resolution / (width * sample_interval);
  const double factor = std::ceil(needed_length / static_cast<double>(n_samples) - 1e-12);
  return std::max<std::size_t>(1, static_cast<std::size_t>(factor));
}

PovResult pov(const SpectralEstimate& estimate, const PovOptions& options) {
  if (options.k_max < 1) throw InvalidParameter("pov: k_max must be >= 1");
  const double width = options.band_hi_hz - options.band_lo_hz;
  if (!(options.band_lo_hz > 0) || !(width > 0)) throw InvalidParameter("pov: need 0 < band_lo < band_hi");
  if (options.k_max * options.band_hi_hz > estimate.nyquist()) {
    throw InvalidParameter("pov: harmonic band " + std::to_string(options.k_max) + " exceeds the Nyquist frequency");
  }
  // Harmonic bands k and k+1 overlap once k * width >= band_lo.
  if ((options.k_max - 1) * options.band_hi_hz >= options.k_max * options.band_lo_hz) {
    throw InvalidParameter("pov: harmonic bands overlap for k_max=" + std::to_string(options.k_max));
  }
  if (estimate.grid_spacing() > width / options.resolution * (1 + 1e-9)) {
    throw InternalError("pov: frequency grid too coarse for the circadian band; increase zero padding");
  }
  const double variance = estimate.total_population_variance();
  if (!(variance > 0)) throw DegenerateSeries("pov: zero variance");

  PovResult r;
  r.k_max = options.k_max;
  r.zero_pad_factor = estimate.zero_pad_factor();
  double total = 0.0;
  for (int k = 1; k <= options.k_max; ++k) {
    const double share = band_power(estimate, harmonic_band(k, options.band_lo_hz, options.band_hi_hz)) / variance;
    r.per_band.push_back(share);
    total += share;
  }
  r.pov_fundamental = 2.0 * r.per_band.front();
  r.pov_harmonic = 2.0 * total;
  return r;
}

PovResult pov(const EnmoSeries& series, const PovOptions& options) {
  if (series.duration_seconds() < 2.0 * kSecondsPerDay - 1e-6) {
    throw DurationError("pov: series must span at least two days");
  }
  if (!(series.population_variance() > 0)) throw DegenerateSeries("pov: series has zero variance");
  const std::size_t pad =
      options.zero_pad_factor ? options.zero_pad_factor
                              : minimum_zero_pad_factor(series.size(), series.sample_interval(), options.band_lo_hz,
                                                        options.band_hi_hz, options.resolution);
  return pov(periodogram(series, pad), options);
}

CosinorFit cosinor(std::span<const double> values, double sample_interval, double first_seconds_of_day) {
  const std::size_t n = values.size();
  if (!(sample_interval > 0)) throw InvalidParameter("cosinor: sample_interval must be positive");
  if (static_cast<double>(n) * sample_interval < kSecondsPerDay - 1e-6) {
    throw DurationError("cosinor: series must span at least one day");
  }
  const double omega = 2.0 * std::numbers::pi / kSecondsPerDay;
  const double nn = static_cast<double>(n);

  // Centred two-regressor least squares.
  double my = 0.0, mc = 0.0, ms = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const double theta = omega * (first_seconds_of_day + static_cast<double>(t) * sample_interval);
    my += values[t];
    mc += std::cos(theta);
    ms += std::sin(theta);
  }
  my /= nn;
  mc /= nn;
  ms /= nn;
  double scc = 0.0, sss = 0.0, scs = 0.0, scy = 0.0, ssy = 0.0, syy = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    const double theta = omega * (first_seconds_of_day + static_cast<double>(t) * sample_interval);
    const double c = std::cos(theta) - mc;
    const double s = std::sin(theta) - ms;
    const double y = values[t] - my;
    scc += c * c;
    sss += s * s;
    scs += c * s;
    scy += c * y;
    ssy += s * y;
    syy += y * y;
  }
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (!(syy > 0) || *lo == *hi) throw DegenerateSeries("cosinor: series has zero variance");
  const double det = scc * sss - scs * scs;
  if (!(det > 0)) throw DegenerateSeries("cosinor: cosine and sine regressors are collinear");
  const double beta_c = (sss * scy - scs * ssy) / det;
  const double beta_s = (scc * ssy - scs * scy) / det;

  CosinorFit fit;
  fit.mesor = my - beta_c * mc - beta_s * ms;
  fit.amplitude = std::hypot(beta_c, beta_s);
  double phase = std::atan2(-beta_s, beta_c);
  if (phase < 0) phase += 2.0 * std::numbers::pi;
  if (phase >= 2.0 * std::numbers::pi) phase = 0.0;
  fit.acrophase = phase;
  const double explained = beta_c * scy + beta_s * ssy;
  fit.r_squared = std::clamp(explained / syy, 0.0, 1.0);
  return fit;
}

CosinorFit cosinor(const EnmoSeries& series) {
  return cosinor(series.values(), series.sample_interval(), seconds_of_day(series.start_time().local_seconds()));
}

}  // namespace actimetry

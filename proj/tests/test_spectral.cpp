#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "actimetry/errors.hpp"
#include "actimetry/spectral.hpp"
#include "actimetry/synth.hpp"

using namespace actimetry;

namespace {

const Timestamp kMidnight = parse_iso8601("2024-03-04T00:00:00+00:00");
constexpr double kDt = 5.0;
constexpr std::size_t kFourteenDays = 14 * 17280;

std::vector<double> daily_wave(Waveform w, std::size_t n = kFourteenDays) {
  std::vector<double> v(n);
  for (std::size_t t = 0; t < n; ++t) v[t] = 1.0 + waveform_value(w, std::fmod(t * kDt, 86400.0));
  return v;
}

std::vector<double> random_series(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::gamma_distribution<double> g(2.0, 0.5);
  std::vector<double> v(n);
  for (auto& x : v) x = g(rng);
  return v;
}

double oracle_pov(const std::vector<double>& x, double dt, int k_max) {
  double total = 0.0;
  for (int k = 1; k <= k_max; ++k) total += oracle::band_integral(x, dt, k / 88200.0, k / 84600.0);
  return 2.0 * total / oracle::population_variance(x);
}

}  // namespace

TEST_CASE("periodogram matches a direct DFT") {
  for (std::size_t n : {100u, 101u, 64u}) {
    for (std::size_t pad : {1u, 2u, 3u}) {
      auto x = random_series(n, n + pad);
      auto est = periodogram(x, 2.5, pad);
      auto ref = oracle::direct_periodogram(x, 2.5, n * pad);
      REQUIRE(est.ordinates().size() == ref.size());
      for (std::size_t k = 0; k < ref.size(); ++k) {
        CHECK(est.ordinates()[k] == doctest::Approx(ref[k]).epsilon(1e-9).scale(1e-12));
      }
      CHECK(est.fft_length() == n * pad);
      CHECK(est.grid_spacing() == doctest::Approx(1.0 / (n * pad * 2.5)));
      CHECK(est.frequency(1) == doctest::Approx(est.grid_spacing()));
    }
  }
}

TEST_CASE("Parseval: two-sided integral equals population variance") {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const std::size_t n = 1000 + 977 * seed;
    auto x = random_series(n, seed);
    for (std::size_t pad : {1u, 2u, 5u}) {
      auto est = periodogram(x, 5.0, pad);
      const double var = oracle::population_variance(x);
      CHECK(std::abs(est.two_sided_integral() - var) <= 1e-9 * var);
      CHECK(est.total_population_variance() == doctest::Approx(var).epsilon(1e-12));
      for (double o : est.ordinates()) CHECK(o >= 0.0);
    }
  }
}

TEST_CASE("Fourier-frequency cosine concentrates in one ordinate") {
  std::vector<double> x(1024);
  for (std::size_t t = 0; t < x.size(); ++t) x[t] = 1.0 + std::cos(2 * std::numbers::pi * t / 16.0);
  auto est = periodogram(x, kDt, 1);
  const std::size_t peak = 1024 / 16;
  CHECK(est.frequency(peak) == doctest::Approx(1.0 / (16 * kDt)));
  const double top = est.ordinates()[peak];
  for (std::size_t k = 0; k < est.ordinates().size(); ++k) {
    if (k != peak) CHECK(est.ordinates()[k] < 1e-10 * top);
  }
}

TEST_CASE("periodogram errors") {
  CHECK_THROWS_AS((void)periodogram(std::vector<double>(64, 3.0), kDt, 1), DegenerateSeries);
  CHECK_THROWS_AS((void)periodogram(random_series(15, 1), kDt, 1), InvalidParameter);
  CHECK_THROWS_AS((void)periodogram(random_series(64, 1), kDt, 0), InvalidParameter);
}

TEST_CASE("harmonic bands") {
  auto b = harmonic_band(3);
  CHECK(b.f_lo == doctest::Approx(3.0 / 88200.0));
  CHECK(b.f_hi == doctest::Approx(3.0 / 84600.0));
  // Bands up to k = 4 are disjoint.
  for (int k = 1; k < 4; ++k) CHECK(harmonic_band(k).f_hi < harmonic_band(k + 1).f_lo);
  CHECK_THROWS_AS((void)harmonic_band(0), InvalidParameter);
}

TEST_CASE("band power on hand-made spectra") {
  const double dt = 1.0;
  const std::size_t n = 100;
  SUBCASE("constant ordinates give c times width") {
    SpectralEstimate est(std::vector<double>(51, 2.0), dt, n, 1, 1.0);
    HarmonicBand band{1, 0.123, 0.2871};
    CHECK(band_power(est, band) == doctest::Approx(2.0 * (0.2871 - 0.123)).epsilon(1e-12));
  }
  SUBCASE("band between two grid points uses interpolated end values") {
    std::vector<double> ord(51);
    for (std::size_t i = 0; i < ord.size(); ++i) ord[i] = 1.0 + 3.0 * i;  // linear in f
    SpectralEstimate est(ord, dt, n, 1, 1.0);
    HarmonicBand band{1, 0.101, 0.108};  // inside [0.10, 0.11]
    auto f = [](double hz) { return 1.0 + 300.0 * hz; };
    CHECK(band_power(est, band) == doctest::Approx(0.5 * (f(0.101) + f(0.108)) * 0.007).epsilon(1e-12));
  }
  SUBCASE("piecewise linear integral across several grid points") {
    std::vector<double> ord(51);
    for (std::size_t i = 0; i < ord.size(); ++i) ord[i] = static_cast<double>(i % 3);
    SpectralEstimate est(ord, dt, n, 1, 1.0);
    // exact integral of the piecewise-linear interpolant from 0.05 to 0.20
    double expected = 0.0;
    const int steps = 150000;
    for (int s = 0; s < steps; ++s) {
      const double fa = 0.05 + 0.15 * (s + 0.5) / steps;
      const double pos = fa * 100.0;
      const auto i = static_cast<std::size_t>(pos);
      const double w = pos - static_cast<double>(i);
      expected += ((1 - w) * ord[i] + w * ord[i + 1]) * 0.15 / steps;
    }
    CHECK(band_power(est, HarmonicBand{1, 0.05, 0.20}) == doctest::Approx(expected).epsilon(1e-6));
  }
  SUBCASE("band outside the grid") {
    SpectralEstimate est(std::vector<double>(51, 1.0), dt, n, 1, 1.0);
    CHECK_THROWS_AS((void)band_power(est, HarmonicBand{1, 0.45, 0.55}), InvalidParameter);
  }
}

TEST_CASE("minimum zero-pad factor") {
  const double width = kCircadianBandHighHz - kCircadianBandLowHz;
  for (std::size_t n : std::vector<std::size_t>{17280 * 2, 17280 * 7, kFourteenDays, 17280 * 30}) {
    const std::size_t pad = minimum_zero_pad_factor(n, kDt);
    CHECK(1.0 / (n * pad * kDt) <= width / 16.0);
    if (pad > 1) CHECK(1.0 / (n * (pad - 1) * kDt) > width / 16.0);
  }
  CHECK(minimum_zero_pad_factor(kFourteenDays, kDt) == 28);
}

TEST_CASE("PoV of a 24 h cosine agrees with the continuous band integral") {
  const auto x = daily_wave(Waveform::Sine);
  EnmoSeries s(x, kMidnight, kDt);
  const PovResult r = pov(s);
  CHECK(r.zero_pad_factor == 28);
  const double ref = 2.0 * oracle::band_integral(x, kDt, kCircadianBandLowHz, kCircadianBandHighHz) /
                     oracle::population_variance(x);
  CHECK(r.pov_fundamental == doctest::Approx(ref).epsilon(2e-3));
  // A 14-day record resolves the fundamental no finer than 1/14 cycles per day,
  // so the one-hour-wide band only holds the central part of the main lobe.
  CHECK(r.pov_fundamental == doctest::Approx(0.532).epsilon(0.01));
  CHECK(r.pov_harmonic - r.pov_fundamental <= 0.01);
}

TEST_CASE("PoV of a 24 h square wave agrees with the continuous band integrals") {
  const auto x = daily_wave(Waveform::Square);
  const PovResult r = pov(EnmoSeries(x, kMidnight, kDt));
  CHECK(r.pov_harmonic > r.pov_fundamental);
  CHECK(r.pov_fundamental == doctest::Approx(oracle_pov(x, kDt, 1)).epsilon(2e-3));
  CHECK(r.pov_harmonic == doctest::Approx(oracle_pov(x, kDt, 4)).epsilon(2e-3));
  // even harmonics carry nothing
  CHECK(r.per_band[1] < 1e-4);
  CHECK(r.per_band[3] < 1e-4);
  // Line power falls as 1/k^2 but band k is k times wider and still inside the
  // main lobe of the window, so it keeps between 1 and k times the fraction.
  const double ratio = r.per_band[2] / r.per_band[0];
  CHECK(ratio > 1.0 / 9.0);
  CHECK(ratio < 3.0 / 9.0);
}

TEST_CASE("PoV invariants") {
  Rng rng(3);
  auto noise = white_noise(kFourteenDays / 2, 0.2, rng);
  auto x = daily_wave(Waveform::Activity, kFourteenDays / 2);
  for (std::size_t t = 0; t < x.size(); ++t) x[t] = std::max(0.0, x[t] + noise[t]);
  EnmoSeries s(x, kMidnight, kDt);
  const PovResult r = pov(s);
  CHECK(r.pov_fundamental >= 0.0);
  CHECK(r.pov_fundamental <= r.pov_harmonic);
  CHECK(r.pov_harmonic <= 1.0);
  double sum = 0.0;
  for (double b : r.per_band) sum += b;
  CHECK(2.0 * sum == doctest::Approx(r.pov_harmonic).epsilon(1e-12));

  double previous = 0.0;
  for (int k = 1; k <= 4; ++k) {
    PovOptions o;
    o.k_max = k;
    const double h = pov(s, o).pov_harmonic;
    CHECK(h >= previous);
    previous = h;
  }

  std::vector<double> y(x);
  for (auto& v : y) v = 4.0 * v + 0.5;
  const PovResult ry = pov(EnmoSeries(y, kMidnight, kDt));
  CHECK(ry.pov_fundamental == doctest::Approx(r.pov_fundamental).epsilon(1e-9));
  CHECK(ry.pov_harmonic == doctest::Approx(r.pov_harmonic).epsilon(1e-9));
}

TEST_CASE("PoV of white noise is tiny and padding-insensitive") {
  Rng rng(9);
  auto x = white_noise(kFourteenDays, 1.0, rng);
  for (auto& v : x) v += 10.0;
  EnmoSeries s(x, kMidnight, kDt);
  const PovResult r = pov(s);
  CHECK(r.pov_harmonic < 0.01);
  const auto square = daily_wave(Waveform::Square);
  EnmoSeries sq(square, kMidnight, kDt);
  const PovResult base = pov(sq);
  PovOptions doubled;
  doubled.zero_pad_factor = 2 * base.zero_pad_factor;
  const PovResult fine = pov(sq, doubled);
  CHECK(std::abs(fine.pov_fundamental / base.pov_fundamental - 1.0) < 0.01);
  CHECK(std::abs(fine.pov_harmonic / base.pov_harmonic - 1.0) < 0.01);
}

TEST_CASE("PoV errors") {
  CHECK_THROWS_AS((void)pov(EnmoSeries(daily_wave(Waveform::Sine, 17280), kMidnight, kDt)), DurationError);
  CHECK_THROWS_AS((void)pov(EnmoSeries(std::vector<double>(kFourteenDays, 1.0), kMidnight, kDt)), DegenerateSeries);
  // Hourly sampling puts the fourth harmonic well below Nyquist, but a
  // 12-hour grid does not.
  std::vector<double> coarse(40);
  for (std::size_t i = 0; i < coarse.size(); ++i) coarse[i] = i % 2 ? 1.0 : 0.0;
  CHECK_THROWS_AS((void)pov(EnmoSeries(coarse, kMidnight, 43200.0)), InvalidParameter);
  // An explicitly too-coarse grid is refused.
  PovOptions o;
  o.zero_pad_factor = 1;
  CHECK_THROWS_AS((void)pov(EnmoSeries(daily_wave(Waveform::Sine), kMidnight, kDt), o), InternalError);
}

TEST_CASE("cosinor examples") {
  SUBCASE("exact model") {
    std::vector<double> x(2 * 288);
    for (std::size_t t = 0; t < x.size(); ++t) x[t] = 3.0 + 2.0 * std::cos(2 * std::numbers::pi * t * 300.0 / 86400.0);
    auto c = cosinor(EnmoSeries(x, kMidnight, 300.0));
    CHECK(c.mesor == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(c.amplitude == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(c.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.period_hours == 24.0);
  }
  SUBCASE("sine has acrophase 3 pi / 2") {
    std::vector<double> x(3 * 288);
    for (std::size_t t = 0; t < x.size(); ++t) x[t] = 2.0 * std::sin(2 * std::numbers::pi * t * 300.0 / 86400.0);
    auto c = cosinor(x, 300.0, 0.0);
    CHECK(c.amplitude == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(c.acrophase == doctest::Approx(1.5 * std::numbers::pi).epsilon(1e-12));
    CHECK(std::abs(c.mesor) < 1e-12);
  }
  SUBCASE("acrophase is referenced to local midnight") {
    std::vector<double> x(2 * 288);
    const double first = 6 * 3600.0;
    for (std::size_t t = 0; t < x.size(); ++t) {
      x[t] = 1.0 + std::cos(2 * std::numbers::pi * (first + t * 300.0) / 86400.0 - 1.0);
    }
    auto c = cosinor(EnmoSeries(x, parse_iso8601("2024-03-04T06:00:00+00:00"), 300.0));
    CHECK(c.acrophase == doctest::Approx(2 * std::numbers::pi - 1.0).epsilon(1e-10));
  }
  SUBCASE("white noise explains almost nothing") {
    Rng rng(5);
    auto x = white_noise(kFourteenDays, 1.0, rng);
    CHECK(cosinor(x, kDt, 0.0).r_squared <= 0.01);
  }
  CHECK_THROWS_AS((void)cosinor(std::vector<double>(100, 1.0), kDt, 0.0), DurationError);
  CHECK_THROWS_AS((void)cosinor(std::vector<double>(17280, 1.0), kDt, 0.0), DegenerateSeries);
}

TEST_CASE("cosinor R^2 equals the squared correlation of fitted and observed") {
  Rng rng(21);
  auto noise = white_noise(3 * 17280, 0.5, rng);
  std::vector<double> x(noise.size());
  const double first = 2 * 3600.0;
  for (std::size_t t = 0; t < x.size(); ++t) {
    x[t] = 1.0 + 0.4 * std::cos(2 * std::numbers::pi * (first + t * kDt) / 86400.0 + 0.7) + noise[t];
  }
  auto c = cosinor(x, kDt, first);
  std::vector<double> fitted(x.size());
  for (std::size_t t = 0; t < x.size(); ++t) {
    fitted[t] = c.mesor + c.amplitude * std::cos(2 * std::numbers::pi * (first + t * kDt) / 86400.0 + c.acrophase);
  }
  const double r = oracle::pearson(fitted, x);
  CHECK(c.r_squared == doctest::Approx(r * r).epsilon(1e-9));
  CHECK(c.amplitude >= 0.0);
  CHECK(c.acrophase >= 0.0);
  CHECK(c.acrophase < 2 * std::numbers::pi);
}

#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "actimetry/dfa.hpp"
#include "actimetry/errors.hpp"
#include "actimetry/synth.hpp"

using namespace actimetry;

namespace {

const Timestamp kMidnight = parse_iso8601("2024-03-04T00:00:00+00:00");

std::vector<double> shifted(std::vector<double> v, double offset) {
  for (auto& x : v) x += offset;
  return v;
}

}  // namespace

TEST_CASE("scale schedule") {
  DfaConfig c;
  CHECK(c.scale_exponents().size() == 17);
  const std::vector<std::size_t> expected{16, 19, 23, 27, 32, 38, 45, 54, 64, 76, 91, 108, 128, 152, 181, 215, 256};
  CHECK(c.scales() == expected);
  auto dup = DfaConfig::from_range(2, 3, 0.05);
  for (std::size_t i = 1; i < dup.scales().size(); ++i) CHECK(dup.scales()[i] > dup.scales()[i - 1]);
  CHECK_THROWS_AS(DfaConfig::from_range(1, 3, 0.5), InvalidParameter);
  CHECK_THROWS_AS(DfaConfig::from_range(5, 4, 0.5), InvalidParameter);
  CHECK_THROWS_AS(DfaConfig::from_range(4, 8, 0), InvalidParameter);
}

TEST_CASE("profile examples") {
  const std::vector<double> a{1, 2, 3};
  CHECK(dfa_profile(a) == std::vector<double>{-1, -1, 0});
  const std::vector<double> c{4, 4, 4, 4};
  for (double z : dfa_profile(c)) CHECK(z == 0.0);
  const std::vector<double> b{2, 0};
  CHECK(dfa_profile(b) == std::vector<double>{1, 0});
}

TEST_CASE("fluctuation examples") {
  const std::vector<double> p1{0, 1, 0, 1};
  CHECK(fluctuation(p1, 2) == 0.0);
  const std::vector<double> p2{0, 1, 0};
  CHECK(fluctuation(p2, 3) == doctest::Approx(std::sqrt(2.0 / 9.0)).epsilon(1e-14));
  CHECK(fluctuation(p2, 3) == doctest::Approx(oracle::fluctuation(p2, 3)).epsilon(1e-14));

  std::vector<double> piecewise;
  for (int seg = 0; seg < 5; ++seg) {
    for (int i = 0; i < 8; ++i) piecewise.push_back(seg * 3.0 - 2.0 * seg * i + 0.5 * i);
  }
  CHECK(fluctuation(piecewise, 8) == 0.0);

  CHECK_THROWS_AS((void)fluctuation(p2, 1), InvalidParameter);
  CHECK_THROWS_AS((void)fluctuation(p2, 4), InvalidParameter);
}

TEST_CASE("fluctuation matches brute-force least squares, trailing remainder discarded") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n01;
  std::vector<double> x(1000);
  for (auto& v : x) v = n01(rng);
  const auto z = dfa_profile(x);
  const auto zo = oracle::cumulative_profile(x);
  for (std::size_t t = 0; t < x.size(); ++t) CHECK(z[t] == doctest::Approx(zo[t]).epsilon(1e-9));
  for (std::size_t s : {4u, 7u, 16u, 33u, 100u, 333u, 500u}) {
    CHECK(fluctuation(z, s) == doctest::Approx(oracle::fluctuation(zo, s)).epsilon(1e-9));
  }
}

TEST_CASE("fluctuation invariances") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n01;
  std::vector<double> x(2000);
  for (auto& v : x) v = std::abs(n01(rng));
  const auto z = dfa_profile(x);
  auto neg = z;
  for (auto& v : neg) v = -v;
  const auto z_shift = dfa_profile(shifted(x, 10.0));
  for (std::size_t s : {16u, 64u, 256u}) {
    const double f = fluctuation(z, s);
    CHECK(fluctuation(neg, s) == doctest::Approx(f).epsilon(1e-12));
    CHECK(fluctuation(z_shift, s) == doctest::Approx(f).epsilon(1e-9));
  }
}

TEST_CASE("alpha matches an independent log-log regression") {
  Rng rng(7);
  auto x = white_noise(20000, 1.0, rng);
  DfaConfig cfg;
  auto fit = dfa_alpha(x, cfg);
  const auto zo = oracle::cumulative_profile(x);
  std::vector<double> lx, ly;
  for (std::size_t s : cfg.scales()) {
    lx.push_back(std::log2(static_cast<double>(s)));
    ly.push_back(std::log2(oracle::fluctuation(zo, s)));
  }
  const auto line = oracle::ols(lx, ly);
  CHECK(fit.alpha == doctest::Approx(line.slope).epsilon(1e-9));
  CHECK(fit.intercept == doctest::Approx(line.intercept).epsilon(1e-9));
  CHECK(fit.r_squared == doctest::Approx(line.r_squared).epsilon(1e-9));
  CHECK(fit.r_squared >= 0.0);
  CHECK(fit.r_squared <= 1.0);
  for (double f : fit.fluctuations) CHECK(f > 0.0);
}

TEST_CASE("alpha invariant under positive scaling, intercept shifts by log2 a") {
  Rng rng(8);
  auto x = pink_noise(1 << 14, 1.0, rng);
  auto y = x;
  for (auto& v : y) v = 3.0 * v + 1.0;
  auto fx = dfa_alpha(x);
  auto fy = dfa_alpha(y);
  CHECK(fy.alpha == doctest::Approx(fx.alpha).epsilon(1e-10));
  CHECK(fy.intercept == doctest::Approx(fx.intercept + std::log2(3.0)).epsilon(1e-10));
}

TEST_CASE("alpha calibration on reference processes") {
  double white = 0, walk = 0, pink = 0;
  const int reps = 5;
  for (int r = 0; r < reps; ++r) {
    Rng rng(100 + r);
    white += dfa_alpha(white_noise(100000, 1.0, rng)).alpha;
    walk += dfa_alpha(random_walk(100000, 1.0, rng)).alpha;
    pink += dfa_alpha(pink_noise(100000, 1.0, rng)).alpha;
  }
  CHECK(std::abs(white / reps - 0.5) <= 0.05);
  CHECK(std::abs(walk / reps - 1.5) <= 0.10);
  CHECK(std::abs(pink / reps - 1.0) <= 0.10);
}

TEST_CASE("F(S) mostly increases with S for stationary noise") {
  Rng rng(12);
  auto fit = dfa_alpha(white_noise(50000, 1.0, rng));
  int up = 0;
  for (std::size_t i = 1; i < fit.fluctuations.size(); ++i) up += fit.fluctuations[i] > fit.fluctuations[i - 1];
  CHECK(up > static_cast<int>(fit.fluctuations.size() - 1) / 2);
}

TEST_CASE("alpha errors") {
  const std::vector<double> constant(4000, 2.0);
  CHECK_THROWS_AS((void)dfa_alpha(constant), DegenerateFluctuation);

  Rng rng(1);
  // N = 40 keeps only S = 16 and 19 at or below N/2.
  CHECK_THROWS_AS((void)dfa_alpha(white_noise(40, 1.0, rng)), InsufficientScales);
  auto x = white_noise(300, 1.0, rng);
  auto fit = dfa_alpha(x);
  CHECK(fit.scales.back() <= 150);
  CHECK_FALSE(fit.warnings.empty());
  CHECK_THROWS_AS((void)dfa_alpha(std::vector<double>{1.0}), EmptyData);
}

TEST_CASE("parallel scales give identical fits") {
  Rng rng(4);
  auto x = white_noise(40000, 1.0, rng);
  auto a = dfa_alpha(x, {}, 1);
  auto b = dfa_alpha(x, {}, 4);
  CHECK(a.fluctuations == b.fluctuations);
  CHECK(a.alpha == b.alpha);
}

TEST_CASE("day/night DFA") {
  // 8 days at 5 s; night samples white, day samples 1/f.
  const std::size_t per_day = 17280;
  const std::size_t days = 8;
  const DayNightSchedule sched;
  std::size_t n_night = 0;
  for (std::size_t t = 0; t < per_day; ++t) n_night += sched.is_night(static_cast<double>(t) * 5.0);
  Rng rng(33);
  auto night = white_noise(n_night * days, 1.0, rng);
  auto day = pink_noise((per_day - n_night) * days, 1.0, rng);
  std::vector<double> v;
  std::size_t i_day = 0, i_night = 0;
  for (std::size_t t = 0; t < per_day * days; ++t) {
    const bool is_night = sched.is_night(static_cast<double>(t % per_day) * 5.0);
    v.push_back(10.0 + (is_night ? night[i_night++] : day[i_day++]));
  }
  EnmoSeries s(v, kMidnight, 5.0);
  auto r = dfa_day_night(s, sched);
  CHECK(std::abs(r.day.alpha - 1.0) <= 0.1);
  CHECK(std::abs(r.night.alpha - 0.5) <= 0.1);

  // Same process in both partitions: exponents agree.
  Rng rng2(34);
  auto same = white_noise(per_day * days, 1.0, rng2);
  auto r2 = dfa_day_night(EnmoSeries(shifted(same, 10.0), kMidnight, 5.0), sched);
  CHECK(std::abs(r2.day.alpha - r2.night.alpha) < 0.05);

  // No night samples at all.
  std::vector<double> daytime(4000);
  for (auto& x : daytime) x = 10.0 + std::abs(std::sin(static_cast<double>(&x - daytime.data())));
  try {
    (void)dfa_day_night(EnmoSeries(daytime, kMidnight.plus(7 * 3600.0), 5.0), sched);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).rfind("nighttime", 0) == 0);
  }
}

#include "actimetry/synth.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>

#include "actimetry/errors.hpp"
#include "fft.hpp"

namespace actimetry {

namespace {

void check_sd(const char* fn, double sd) {
  if (!(sd >= 0.0) || !std::isfinite(sd)) throw InvalidParameter(std::string(fn) + ": sd must be finite and >= 0");
}

}  // namespace

std::vector<double> white_noise(std::size_t n, double sd, Rng& rng) {
  check_sd("white_noise", sd);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> x(n);
  for (auto& v : x) v = sd * normal(rng);
  return x;
}

std::vector<double> ar1_noise(std::size_t n, double phi, double sd, Rng& rng) {
  if (!(std::abs(phi) < 1.0)) throw InvalidParameter("ar1_noise: |phi| must be < 1");
  check_sd("ar1_noise", sd);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> x(n);
  if (n == 0) return x;
  const double innovation_sd = sd * std::sqrt(1.0 - phi * phi);
  x[0] = sd * normal(rng);
  for (std::size_t t = 1; t < n; ++t) x[t] = phi * x[t - 1] + innovation_sd * normal(rng);
  return x;
}

std::vector<double> power_law_noise(std::size_t n, double exponent, double sd, Rng& rng) {
  if (n < 4) throw InvalidParameter("power_law_noise: need at least 4 samples");
  check_sd("power_law_noise", sd);
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t length = n + (n % 2);
  const std::size_t bins = length / 2 + 1;
  std::vector<std::complex<double>> half(bins);
  for (std::size_t k = 1; k < bins; ++k) {
    const double amp = std::pow(static_cast<double>(k) / static_cast<double>(length), -exponent / 2.0);
    const double re = normal(rng);
    const double im = k == bins - 1 ? 0.0 : normal(rng);
    half[k] = {amp * re, amp * im};
  }
  std::vector<double> x = detail::half_spectrum_inverse_fft(half, length);
  x.resize(n);
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
  double ss = 0.0;
  for (double v : x) ss += (v - mean) * (v - mean);
  const double scale = sd / std::sqrt(ss / static_cast<double>(n));
  for (auto& v : x) v = (v - mean) * scale;
  return x;
}

std::vector<double> random_walk(std::size_t n, double sd, Rng& rng) {
  std::vector<double> x = white_noise(n, sd, rng);
  std::partial_sum(x.begin(), x.end(), x.begin());
  return x;
}

double waveform_value(Waveform w, double sod, double phase_hours) {
  constexpr double hour = 3600.0;
  const double tau = seconds_of_day(sod - phase_hours * hour);
  switch (w) {
    case Waveform::None: return 0.0;
    case Waveform::Sine: return std::cos(2.0 * std::numbers::pi * tau / kSecondsPerDay);
    case Waveform::Square: return tau < 12.0 * hour ? 1.0 : -1.0;
    case Waveform::Activity: {
      // Frame anchored at 03:00 so the wake plateau (07:00-23:00) does not wrap.
      const double u = seconds_of_day(tau - 3.0 * hour);
      const double width = 0.5 * hour;
      auto sigmoid = [](double z) { return 1.0 / (1.0 + std::exp(-z)); };
      const double plateau = sigmoid((u - 4.0 * hour) / width) * sigmoid((20.0 * hour - u) / width);
      return 2.0 * plateau - 1.0;
    }
  }
  return 0.0;
}

namespace {

Waveform parse_waveform(const std::string& s) {
  if (s == "none") return Waveform::None;
  if (s == "sine") return Waveform::Sine;
  if (s == "square") return Waveform::Square;
  if (s == "activity") return Waveform::Activity;
  throw InvalidParameter("unknown waveform '" + s + "'");
}

NoiseModel parse_noise(const std::string& s) {
  if (s == "none") return NoiseModel::None;
  if (s == "iid") return NoiseModel::Iid;
  if (s == "ar1") return NoiseModel::Ar1;
  if (s == "pink") return NoiseModel::Pink;
  throw InvalidParameter("unknown noise model '" + s + "'");
}

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::logic_error&) {
    throw InvalidParameter("recipe: '" + key + "' expects a number, got '" + value + "'");
  }
}

std::uint64_t to_uint(const std::string& key, const std::string& value) {
  const double v = to_double(key, value);
  if (v < 0 || v != std::floor(v)) throw InvalidParameter("recipe: '" + key + "' expects a nonnegative integer");
  return static_cast<std::uint64_t>(v);
}

GroupRecipe parse_group_line(std::istringstream& tokens) {
  GroupRecipe g;
  std::string token;
  while (tokens >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos) throw InvalidParameter("recipe: expected key=value, got '" + token + "'");
    const std::string key = token.substr(0, eq);
    const std::string value = token.substr(eq + 1);
    if (key == "label") g.group = Group::parse(value);
    else if (key == "count") g.count = to_uint(key, value);
    else if (key == "prefix") g.id_prefix = value;
    else if (key == "waveform") g.waveform = parse_waveform(value);
    else if (key == "amplitude") g.amplitude = to_double(key, value);
    else if (key == "amplitude_jitter") g.amplitude_jitter = to_double(key, value);
    else if (key == "phase_hours") g.phase_hours = to_double(key, value);
    else if (key == "baseline") g.baseline = to_double(key, value);
    else if (key == "noise") g.noise = parse_noise(value);
    else if (key == "noise_sd") g.noise_sd = to_double(key, value);
    else if (key == "noise_sd_jitter") g.noise_sd_jitter = to_double(key, value);
    else if (key == "ar_coef") g.ar_coef = to_double(key, value);
    else if (key == "white_sd") g.white_sd = to_double(key, value);
    else throw InvalidParameter("recipe: unknown group key '" + key + "'");
  }
  return g;
}

}  // namespace

CohortRecipe preset_recipe(const std::string& name) {
  CohortRecipe r;
  GroupRecipe g;
  g.count = 1;
  g.id_prefix = name;
  if (name == "pure-sine") {
    g.waveform = Waveform::Sine;
    g.amplitude = 1.0;
    g.baseline = 1.0;
  } else if (name == "square") {
    g.waveform = Waveform::Square;
    g.amplitude = 1.0;
    g.baseline = 1.0;
  } else if (name == "white-noise") {
    g.waveform = Waveform::None;
    g.baseline = 10.0;
    g.noise = NoiseModel::Iid;
    g.noise_sd = 1.0;
  } else if (name == "pink-noise") {
    g.waveform = Waveform::None;
    g.baseline = 10.0;
    g.noise = NoiseModel::Pink;
    g.noise_sd = 1.0;
  } else if (name == "cohort") {
    // Control-like: strong non-sinusoidal daily rhythm over smooth 1/f noise.
    GroupRecipe control;
    control.group = Group::without_dementia();
    control.id_prefix = "control";
    control.count = 15;
    control.waveform = Waveform::Activity;
    control.amplitude = 0.6;
    control.amplitude_jitter = 0.3;
    control.phase_hours = 0.0;
    control.baseline = 0.7;
    control.noise = NoiseModel::Pink;
    control.noise_sd = 0.3;
    control.noise_sd_jitter = 0.3;
    control.white_sd = 0.05;
    // Dementia-like: weak rhythm, rough noise with a large white component.
    GroupRecipe dementia;
    dementia.group = Group::non_intervention();
    dementia.id_prefix = "dementia";
    dementia.count = 15;
    dementia.waveform = Waveform::Activity;
    dementia.amplitude = 0.06;
    dementia.amplitude_jitter = 0.5;
    dementia.baseline = 0.3;
    dementia.noise = NoiseModel::Pink;
    dementia.noise_sd = 0.12;
    dementia.noise_sd_jitter = 0.3;
    dementia.white_sd = 0.08;
    r.groups = {control, dementia};
    return r;
  } else {
    throw InvalidParameter("unknown preset '" + name + "'");
  }
  r.groups.push_back(g);
  return r;
}

CohortRecipe parse_recipe(std::istream& in) {
  CohortRecipe r;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream tokens(line);
    std::string first;
    if (!(tokens >> first)) continue;
    if (first == "group") {
      r.groups.push_back(parse_group_line(tokens));
      continue;
    }
    const auto eq = first.find('=');
    std::string rest;
    if (eq == std::string::npos || (tokens >> rest)) {
      throw InvalidParameter("recipe line " + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = first.substr(0, eq);
    const std::string value = first.substr(eq + 1);
    if (key == "days") r.days = to_double(key, value);
    else if (key == "sample_interval") r.sample_interval = to_double(key, value);
    else if (key == "seed") r.seed = to_uint(key, value);
    else if (key == "start") r.start = parse_iso8601(value);
    else throw InvalidParameter("recipe line " + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  validate(r);
  return r;
}

void validate(const CohortRecipe& r) {
  if (r.groups.empty()) throw InvalidParameter("recipe: no groups");
  if (!(r.days > 0) || !(r.sample_interval > 0)) throw InvalidParameter("recipe: days and sample_interval must be positive");
  const double n = r.days * kSecondsPerDay / r.sample_interval;
  if (std::abs(n - std::round(n)) > 1e-9 * n || n < 16) {
    throw InvalidParameter("recipe: days * 86400 / sample_interval must be an integer >= 16");
  }
  for (const auto& g : r.groups) {
    if (g.count == 0) throw InvalidParameter("recipe: group count must be >= 1");
    if (g.amplitude < 0 || g.noise_sd < 0 || g.white_sd < 0) throw InvalidParameter("recipe: negative amplitude or sd");
    if (g.amplitude_jitter < 0 || g.amplitude_jitter > 1 || g.noise_sd_jitter < 0 || g.noise_sd_jitter > 1) {
      throw InvalidParameter("recipe: jitter must be in [0, 1]");
    }
    if (g.noise == NoiseModel::Ar1 && !(std::abs(g.ar_coef) < 1)) throw InvalidParameter("recipe: |ar_coef| must be < 1");
    if (g.noise != NoiseModel::None && !(g.noise_sd > 0)) throw InvalidParameter("recipe: noise model needs noise_sd > 0");
  }
}

std::vector<Recording> synthesize(const CohortRecipe& recipe) {
  validate(recipe);
  const auto n = static_cast<std::size_t>(std::llround(recipe.days * kSecondsPerDay / recipe.sample_interval));
  const double start_local = recipe.start.local_seconds();
  std::vector<Recording> out;
  for (std::size_t gi = 0; gi < recipe.groups.size(); ++gi) {
    const auto& g = recipe.groups[gi];
    const std::string prefix = g.id_prefix.empty() ? g.group.name() : g.id_prefix;
    for (std::size_t si = 0; si < g.count; ++si) {
      std::seed_seq seq{static_cast<std::uint32_t>(recipe.seed), static_cast<std::uint32_t>(recipe.seed >> 32),
                        static_cast<std::uint32_t>(gi), static_cast<std::uint32_t>(si)};
      Rng rng(seq);
      std::uniform_real_distribution<double> unit(-1.0, 1.0);
      const double amplitude = g.amplitude * (1.0 + g.amplitude_jitter * unit(rng));
      const double noise_sd = g.noise_sd * (1.0 + g.noise_sd_jitter * unit(rng));

      std::vector<double> x(n, 0.0);
      switch (g.noise) {
        case NoiseModel::None: break;
        case NoiseModel::Iid: x = white_noise(n, noise_sd, rng); break;
        case NoiseModel::Ar1: x = ar1_noise(n, g.ar_coef, noise_sd, rng); break;
        case NoiseModel::Pink: x = pink_noise(n, noise_sd, rng); break;
      }
      if (g.white_sd > 0) {
        const auto w = white_noise(n, g.white_sd, rng);
        for (std::size_t t = 0; t < n; ++t) x[t] += w[t];
      }
      for (std::size_t t = 0; t < n; ++t) {
        const double sod = seconds_of_day(start_local + static_cast<double>(t) * recipe.sample_interval);
        x[t] = std::max(0.0, g.baseline + amplitude * waveform_value(g.waveform, sod, g.phase_hours) + x[t]);
      }
      char id[32];
      std::snprintf(id, sizeof id, "_%02zu", si + 1);
      out.emplace_back(prefix + (g.count > 1 ? std::string(id) : std::string()), g.group, recipe.start,
                       recipe.sample_interval, std::move(x));
    }
  }
  return out;
}

}  // namespace actimetry

#include "actimetry/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>

#include "actimetry/errors.hpp"

namespace actimetry {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double to_double(const std::string& key, std::string_view v) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) {
    throw InvalidParameter(key + ": expected a number, got '" + std::string(v) + "'");
  }
  return out;
}

std::uint64_t to_unsigned(const std::string& key, std::string_view v) {
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw InvalidParameter(key + ": expected a nonnegative integer, got '" + std::string(v) + "'");
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_analysis_fields(std::ostream& out, const RunConfig& c) {
  out << "iv_delta=" << c.iv_delta << '\n'
      << "iv_sweep_min=" << c.iv_sweep_min << '\n'
      << "iv_sweep_max=" << c.iv_sweep_max << '\n'
      << "dfa_exponent_min=" << num(c.dfa_exponent_min) << '\n'
      << "dfa_exponent_max=" << num(c.dfa_exponent_max) << '\n'
      << "dfa_exponent_step=" << num(c.dfa_exponent_step) << '\n'
      << "night_start_hour=" << num(c.night_start_hour) << '\n'
      << "night_end_hour=" << num(c.night_end_hour) << '\n'
      << "pov_k_max=" << c.pov_k_max << '\n'
      << "band_lo_hz=" << num(c.band_lo_hz) << '\n'
      << "band_hi_hz=" << num(c.band_hi_hz) << '\n'
      << "zero_pad_factor=" << c.zero_pad_factor << '\n'
      << "pad_resolution=" << num(c.pad_resolution) << '\n'
      << "is_bin_seconds=" << num(c.is_bin_seconds) << '\n'
      << "profile_bin_seconds=" << num(c.profile_bin_seconds) << '\n'
      << "spectrum_max_hz=" << num(c.spectrum_max_hz) << '\n'
      << "seed=" << c.seed << '\n';
}

}  // namespace

void RunConfig::validate() const {
  if (iv_delta < 1) throw InvalidParameter("iv_delta must be at least 1");
  if (iv_sweep_min < 1 || iv_sweep_max < iv_sweep_min) {
    throw InvalidParameter("iv sweep range must satisfy 1 <= iv_sweep_min <= iv_sweep_max");
  }
  (void)dfa_config();
  schedule().validate();
  if (pov_k_max < 1) throw InvalidParameter("pov_k_max must be at least 1");
  if (!(band_lo_hz > 0) || !(band_hi_hz > band_lo_hz)) {
    throw InvalidParameter("band edges must satisfy 0 < band_lo_hz < band_hi_hz");
  }
  if (!(pad_resolution >= 1)) throw InvalidParameter("pad_resolution must be at least 1");
  if (!(is_bin_seconds > 0)) throw InvalidParameter("is_bin_seconds must be positive");
  if (!(profile_bin_seconds > 0)) throw InvalidParameter("profile_bin_seconds must be positive");
  if (!(spectrum_max_hz > 0)) throw InvalidParameter("spectrum_max_hz must be positive");
}

DfaConfig RunConfig::dfa_config() const {
  return DfaConfig::from_range(dfa_exponent_min, dfa_exponent_max, dfa_exponent_step);
}

DayNightSchedule RunConfig::schedule() const { return {night_start_hour, night_end_hour}; }

PovOptions RunConfig::pov_options() const {
  PovOptions o;
  o.k_max = pov_k_max;
  o.band_lo_hz = band_lo_hz;
  o.band_hi_hz = band_hi_hz;
  o.zero_pad_factor = zero_pad_factor;
  o.resolution = pad_resolution;
  return o;
}

std::vector<std::size_t> RunConfig::sweep_deltas() const {
  std::vector<std::size_t> d;
  for (std::size_t k = iv_sweep_min; k <= iv_sweep_max; ++k) d.push_back(k);
  return d;
}

const std::vector<std::string>& setting_keys() {
  static const std::vector<std::string> keys{
      "inputs",          "output_dir",        "iv_delta",         "iv_sweep_min",     "iv_sweep_max",
      "dfa_exponent_min", "dfa_exponent_max", "dfa_exponent_step", "night_start_hour", "night_end_hour",
      "pov_k_max",       "band_lo_hz",        "band_hi_hz",       "zero_pad_factor",  "pad_resolution",
      "is_bin_seconds",  "profile_bin_seconds", "spectrum_max_hz", "workers",          "seed"};
  return keys;
}

void apply_setting(RunConfig& c, const std::string& key, const std::string& raw) {
  const std::string_view v = trim(raw);
  if (key == "inputs" || key == "input") {
    c.inputs.emplace_back(v);
  } else if (key == "output_dir") {
    c.output_dir = std::string(v);
  } else if (key == "iv_delta") {
    c.iv_delta = to_unsigned(key, v);
  } else if (key == "iv_sweep_min") {
    c.iv_sweep_min = to_unsigned(key, v);
  } else if (key == "iv_sweep_max") {
    c.iv_sweep_max = to_unsigned(key, v);
  } else if (key == "dfa_exponent_min") {
    c.dfa_exponent_min = to_double(key, v);
  } else if (key == "dfa_exponent_max") {
    c.dfa_exponent_max = to_double(key, v);
  } else if (key == "dfa_exponent_step") {
    c.dfa_exponent_step = to_double(key, v);
  } else if (key == "night_start_hour") {
    c.night_start_hour = to_double(key, v);
  } else if (key == "night_end_hour") {
    c.night_end_hour = to_double(key, v);
  } else if (key == "pov_k_max") {
    c.pov_k_max = static_cast<int>(to_unsigned(key, v));
  } else if (key == "band_lo_hz") {
    c.band_lo_hz = to_double(key, v);
  } else if (key == "band_hi_hz") {
    c.band_hi_hz = to_double(key, v);
  } else if (key == "zero_pad_factor") {
    c.zero_pad_factor = to_unsigned(key, v);
  } else if (key == "pad_resolution") {
    c.pad_resolution = to_double(key, v);
  } else if (key == "is_bin_seconds") {
    c.is_bin_seconds = to_double(key, v);
  } else if (key == "profile_bin_seconds") {
    c.profile_bin_seconds = to_double(key, v);
  } else if (key == "spectrum_max_hz") {
    c.spectrum_max_hz = to_double(key, v);
  } else if (key == "workers") {
    c.workers = to_unsigned(key, v);
  } else if (key == "seed") {
    c.seed = to_unsigned(key, v);
  } else {
    throw InvalidParameter("unknown config key '" + key + "'");
  }
}

RunConfig parse_config(std::istream& in, RunConfig base) {
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto text = trim(line);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw InvalidParameter("config line " + std::to_string(lineno) + ": expected key=value");
    }
    try {
      apply_setting(base, std::string(trim(text.substr(0, eq))), std::string(text.substr(eq + 1)));
    } catch (const InvalidParameter& e) {
      throw InvalidParameter("config line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return base;
}

RunConfig load_config(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config '" + path + "'");
  return parse_config(in, std::move(base));
}

std::string serialize(const RunConfig& c) {
  std::ostringstream out;
  for (const auto& in : c.inputs) out << "inputs=" << in << '\n';
  out << "output_dir=" << c.output_dir << '\n';
  write_analysis_fields(out, c);
  out << "workers=" << c.workers << '\n';
  return out.str();
}

std::string config_hash(const RunConfig& c) {
  std::ostringstream out;
  write_analysis_fields(out, c);
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : out.str()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace actimetry

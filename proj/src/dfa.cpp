#include "actimetry/dfa.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "actimetry/errors.hpp"
#include "parallel.hpp"

namespace actimetry {

DfaConfig::DfaConfig() : DfaConfig(from_range(4.0, 8.0, 0.25)) {}

DfaConfig::DfaConfig(std::vector<double> scale_exponents) : exponents_(std::move(scale_exponents)) {
  if (exponents_.empty()) throw InvalidParameter("DfaConfig: no scale exponents");
  for (double e : exponents_) {
    if (!std::isfinite(e)) throw InvalidParameter("DfaConfig: non-finite scale exponent");
    const auto s = static_cast<std::size_t>(std::llround(std::exp2(e)));
    if (s < 4) throw InvalidParameter("DfaConfig: every scale must be >= 4 (exponent " + std::to_string(e) + ")");
    scales_.push_back(s);
  }
  std::sort(scales_.begin(), scales_.end());
  scales_.erase(std::unique(scales_.begin(), scales_.end()), scales_.end());
}

DfaConfig DfaConfig::from_range(double min_exponent, double max_exponent, double step) {
  if (!(step > 0) || !(max_exponent >= min_exponent)) {
    throw InvalidParameter("DfaConfig: need step > 0 and max >= min");
  }
  std::vector<double> e;
  const auto count = static_cast<std::size_t>(std::floor((max_exponent - min_exponent) / step + 1e-9)) + 1;
  for (std::size_t i = 0; i < count; ++i) e.push_back(min_exponent + static_cast<double>(i) * step);
  return DfaConfig(std::move(e));
}

std::vector<double> dfa_profile(std::span<const double> values) {
  std::vector<double> z(values.size());
  if (values.empty()) return z;
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  double run = 0.0;
  for (std::size_t t = 0; t < values.size(); ++t) {
    run += values[t] - mean;
    z[t] = run;
  }
  return z;
}

double fluctuation(std::span<const double> profile, std::size_t scale) {
  const std::size_t n = profile.size();
  if (scale < 2 || scale > n) {
    throw InvalidParameter("fluctuation: scale " + std::to_string(scale) + " outside [2, " + std::to_string(n) + "]");
  }
  const std::size_t segments = n / scale;
  const double s = static_cast<double>(scale);
  const double x_mean = (s - 1.0) / 2.0;
  const double sxx = s * (s * s - 1.0) / 12.0;

  double total = 0.0;
  for (std::size_t k = 0; k < segments; ++k) {
    const double* y = profile.data() + k * scale;
    double y_mean = 0.0;
    for (std::size_t i = 0; i < scale; ++i) y_mean += y[i];
    y_mean /= s;
    double syy = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < scale; ++i) {
      const double dy = y[i] - y_mean;
      syy += dy * dy;
      sxy += (static_cast<double>(i) - x_mean) * dy;
    }
    double rss = syy - sxy * sxy / sxx;
    // Exact line fits leave only rounding noise.
    if (rss <= 1e-13 * syy) rss = 0.0;
    total += rss / s;  // RMSD^2 for this segment
  }
  return std::sqrt(total / static_cast<double>(segments));
}

DfaFit dfa_alpha(std::span<const double> values, const DfaConfig& config, std::size_t workers) {
  const std::size_t n = values.size();
  if (n < 2) throw EmptyData("dfa_alpha: need at least 2 samples (N=" + std::to_string(n) + ")");

  DfaFit fit;
  for (std::size_t s : config.scales()) {
    if (s <= n / 2) {
      fit.scales.push_back(s);
    } else {
      fit.warnings.push_back("scale " + std::to_string(s) + " skipped: exceeds N/2");
    }
  }
  if (fit.scales.size() < 3) {
    throw InsufficientScales("dfa_alpha: only " + std::to_string(fit.scales.size()) +
                             " scale(s) fit within N/2 (N=" + std::to_string(n) + ")");
  }

  const std::vector<double> profile = dfa_profile(values);
  fit.fluctuations.resize(fit.scales.size());
  detail::parallel_for(fit.scales.size(), workers,
                       [&](std::size_t i) { fit.fluctuations[i] = fluctuation(profile, fit.scales[i]); });

  for (std::size_t i = 0; i < fit.scales.size(); ++i) {
    if (!(fit.fluctuations[i] > 0) || !std::isfinite(fit.fluctuations[i])) {
      throw DegenerateFluctuation("dfa_alpha: F(S) is zero at scale " + std::to_string(fit.scales[i]));
    }
  }

  const std::size_t k = fit.scales.size();
  std::vector<double> lx(k), ly(k);
  for (std::size_t i = 0; i < k; ++i) {
    lx[i] = std::log2(static_cast<double>(fit.scales[i]));
    ly[i] = std::log2(fit.fluctuations[i]);
  }
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / static_cast<double>(k);
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / static_cast<double>(k);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  fit.alpha = sxy / sxx;
  fit.intercept = my - fit.alpha * mx;
  fit.r_squared = syy > 0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
  return fit;
}

namespace {

DfaFit fit_partition(const EnmoSeries& part, const char* label, const DfaConfig& config, std::size_t workers) {
  const std::string prefix = std::string(label) + ": ";
  try {
    DfaFit fit = dfa_alpha(part.values(), config, workers);
    if (!part.splices().empty()) {
      fit.warnings.push_back(std::to_string(part.splices().size()) + " splice(s) in concatenated partition");
    }
    return fit;
  } catch (const DegenerateFluctuation& e) {
    throw DegenerateFluctuation(prefix + e.what());
  } catch (const InsufficientScales& e) {
    throw InsufficientScales(prefix + e.what());
  } catch (const EmptyData& e) {
    throw EmptyData(prefix + e.what());
  } catch (const Error& e) {
    throw Error(prefix + e.what());
  }
}

}  // namespace

DayNightDfa dfa_day_night(const EnmoSeries& series, const DayNightSchedule& schedule, const DfaConfig& config,
                          std::size_t workers) {
  const DayNightSplit split = split_day_night(series, schedule);
  DayNightDfa out;
  out.day = fit_partition(split.day, "daytime", config, workers);
  out.night = fit_partition(split.night, "nighttime", config, workers);
  return out;
}

}  // namespace actimetry

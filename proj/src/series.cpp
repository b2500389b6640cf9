#include "actimetry/series.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "actimetry/errors.hpp"

namespace actimetry {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return c == '_' ? '-' : static_cast<char>(std::tolower(c));
  });
  return out;
}

}  // namespace

Group Group::parse(std::string_view text) {
  const std::string key = lower(text);
  if (key == "non-intervention" || key == "nonintervention") return non_intervention();
  if (key == "intervention") return intervention();
  if (key == "without-dementia" || key == "withoutdementia") return without_dementia();
  return other(std::string(text));
}

std::string Group::name() const {
  switch (kind) {
    case GroupKind::NonIntervention: return "non-intervention";
    case GroupKind::Intervention: return "intervention";
    case GroupKind::WithoutDementia: return "without-dementia";
    case GroupKind::Other: break;
  }
  return label;
}

double compute_enmo(double x, double y, double z) {
  if (!std::isfinite(x) || !std::isfinite(y) || !std::isfinite(z)) {
    throw InputError("compute_enmo: non-finite acceleration component");
  }
  if (x < 0 || y < 0 || z < 0) {
    throw InputError("compute_enmo: acceleration magnitudes must be nonnegative");
  }
  return std::max(std::sqrt(x * x + y * y + z * z) - 1.0, 0.0);
}

std::size_t samples_per_day(double sample_interval) {
  if (!(sample_interval > 0)) throw InvalidParameter("sample_interval must be positive");
  const double spd = kSecondsPerDay / sample_interval;
  const double rounded = std::round(spd);
  if (rounded < 1 || std::abs(spd - rounded) > 1e-9 * spd) {
    throw InvalidParameter("sample_interval " + std::to_string(sample_interval) +
                           " s does not divide a day evenly");
  }
  return static_cast<std::size_t>(rounded);
}

// ---------------------------------------------------------------------------
// EnmoSeries

EnmoSeries::EnmoSeries(std::vector<double> values, Timestamp start, double sample_interval,
                       std::vector<std::size_t> splices)
    : values_(std::move(values)), start_(start), interval_(sample_interval), splices_(std::move(splices)) {
  if (!(interval_ > 0) || !std::isfinite(interval_)) {
    throw InvalidParameter("EnmoSeries: sample_interval must be positive and finite");
  }
  for (double v : values_) {
    if (!std::isfinite(v) || v < 0) throw InputError("EnmoSeries: values must be finite and nonnegative");
  }
  if (!values_.empty()) {
    const double n = static_cast<double>(values_.size());
    mean_ = std::accumulate(values_.begin(), values_.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : values_) ss += (v - mean_) * (v - mean_);
    variance_ = ss / n;
    // rounding in the mean must not make a constant series look variable
    const auto [lo, hi] = std::minmax_element(values_.begin(), values_.end());
    if (*lo == *hi) {
      mean_ = *lo;
      variance_ = 0.0;
    }
  }
}

// ---------------------------------------------------------------------------
// Recording

Recording::Recording(std::string subject_id, Group group, Timestamp start, double sample_interval,
                     std::vector<double> enmo, std::vector<IndexRange> gaps)
    : subject_id_(std::move(subject_id)),
      group_(std::move(group)),
      start_(start),
      interval_(sample_interval),
      enmo_(std::move(enmo)),
      gaps_(std::move(gaps)) {
  if (!(interval_ > 0) || !std::isfinite(interval_)) {
    throw InvalidParameter("recording '" + subject_id_ + "': sample_interval must be positive");
  }
  if (enmo_.empty()) throw EmptyData("recording '" + subject_id_ + "' has no samples");
  std::size_t prev_end = 0;
  for (std::size_t i = 0; i < gaps_.size(); ++i) {
    const auto& g = gaps_[i];
    if (g.begin >= g.end || g.end > enmo_.size() || (i > 0 && g.begin < prev_end)) {
      throw InputError("recording '" + subject_id_ + "': gap ranges must be nonempty, sorted, disjoint and in bounds");
    }
    prev_end = g.end;
  }
  auto gap = gaps_.begin();
  for (std::size_t t = 0; t < enmo_.size(); ++t) {
    while (gap != gaps_.end() && gap->end <= t) ++gap;
    const bool missing = gap != gaps_.end() && gap->begin <= t;
    if (missing) {
      enmo_[t] = 0.0;
    } else if (!std::isfinite(enmo_[t]) || enmo_[t] < 0) {
      throw InputError("recording '" + subject_id_ + "': ENMO value at index " + std::to_string(t) +
                       " is negative or non-finite");
    }
  }
}

Recording Recording::from_triaxial(std::string subject_id, Group group, Timestamp start, double sample_interval,
                                   std::span<const Triaxial> samples, std::vector<IndexRange> gaps) {
  std::vector<double> enmo(samples.size(), 0.0);
  auto gap = gaps.begin();
  for (std::size_t t = 0; t < samples.size(); ++t) {
    while (gap != gaps.end() && gap->end <= t) ++gap;
    if (gap != gaps.end() && gap->begin <= t) continue;
    enmo[t] = compute_enmo(samples[t]);
  }
  return Recording(std::move(subject_id), std::move(group), start, sample_interval, std::move(enmo),
                   std::move(gaps));
}

EnmoSeries Recording::to_series() const {
  if (!gaps_.empty()) {
    throw InputError("recording '" + subject_id_ + "' still has " + std::to_string(gaps_.size()) +
                     " gap(s); run exclude_missing_days first");
  }
  return EnmoSeries(enmo_, start_, interval_, provenance_.splices);
}

Recording exclude_missing_days(const Recording& rec) {
  const std::size_t spd = samples_per_day(rec.sample_interval());
  const double dt = rec.sample_interval();
  const double first_local = rec.start_time().local_seconds();
  const double end_local = first_local + static_cast<double>(rec.size()) * dt;

  // First midnight at or after the first sample.
  std::int64_t day = local_day_number(first_local);
  if (static_cast<double>(day) * kSecondsPerDay < first_local - 1e-6) ++day;

  std::vector<double> kept;
  Provenance prov;
  std::size_t first_kept_index = 0;
  std::size_t previous_end = std::numeric_limits<std::size_t>::max();
  auto gap = rec.gaps().begin();

  for (;; ++day) {
    const double midnight = static_cast<double>(day) * kSecondsPerDay;
    if (midnight + kSecondsPerDay > end_local + 1e-6) break;
    const auto begin = static_cast<std::size_t>(std::ceil((midnight - first_local) / dt - 1e-9));
    const std::size_t end = begin + spd;
    if (end > rec.size()) break;

    while (gap != rec.gaps().end() && gap->end <= begin) ++gap;
    const bool touched = gap != rec.gaps().end() && gap->begin < end;
    if (touched) {
      prov.dropped_days.push_back(day);
      continue;
    }
    if (kept.empty()) {
      first_kept_index = begin;
    } else if (begin != previous_end) {
      prov.splices.push_back(kept.size());
    }
    prov.retained_days.push_back(day);
    kept.insert(kept.end(), rec.enmo().begin() + static_cast<std::ptrdiff_t>(begin),
                rec.enmo().begin() + static_cast<std::ptrdiff_t>(end));
    previous_end = end;
  }

  if (kept.empty()) {
    throw EmptyData("subject '" + rec.subject_id() + "': no complete gap-free calendar day remains");
  }
  Recording out(rec.subject_id(), rec.group(), rec.start_time().plus(static_cast<double>(first_kept_index) * dt),
                dt, std::move(kept));
  out.provenance_ = std::move(prov);
  out.warnings_ = rec.warnings();
  if (!out.provenance_.splices.empty()) {
    out.warnings_.push_back(std::to_string(out.provenance_.splices.size()) +
                            " splice(s) after dropping days with missing data");
  }
  return out;
}

// ---------------------------------------------------------------------------

EnmoSeries subsample(const EnmoSeries& series, std::size_t delta, std::size_t offset) {
  const std::size_t n = series.size();
  if (delta < 1 || delta > n) {
    throw InvalidParameter("subsample: delta must satisfy 1 <= delta <= N (delta=" + std::to_string(delta) +
                           ", N=" + std::to_string(n) + ")");
  }
  if (offset < 1 || offset > delta) throw InvalidParameter("subsample: offset must be in 1..delta");
  const std::size_t m = n / delta;
  std::vector<double> out(m);
  for (std::size_t k = 0; k < m; ++k) out[k] = series.values()[k * delta + offset - 1];
  return EnmoSeries(std::move(out), series.start_time().plus(static_cast<double>(offset - 1) * series.sample_interval()),
                    series.sample_interval() * static_cast<double>(delta));
}

void DayNightSchedule::validate() const {
  auto ok = [](double h) { return std::isfinite(h) && h >= 0.0 && h < 24.0; };
  if (!ok(night_start_hour) || !ok(night_end_hour)) {
    throw InvalidParameter("day/night hours must lie in [0, 24)");
  }
  if (night_start_hour == night_end_hour) throw InvalidParameter("night start and end hours must differ");
}

bool DayNightSchedule::is_night(double sod) const {
  const double start = night_start_hour * 3600.0;
  const double end = night_end_hour * 3600.0;
  if (start < end) return sod >= start && sod < end;
  return sod >= start || sod < end;
}

DayNightSplit split_day_night(const EnmoSeries& series, const DayNightSchedule& schedule) {
  schedule.validate();
  std::vector<double> day;
  std::vector<double> night;
  std::vector<std::size_t> day_splices;
  std::vector<std::size_t> night_splices;
  std::size_t day_first = 0, night_first = 0;
  int previous = -1;  // 0 day, 1 night
  const auto values = series.values();
  const auto& input_splices = series.splices();
  auto next_input_splice = input_splices.begin();

  for (std::size_t t = 0; t < values.size(); ++t) {
    const bool is_night = schedule.is_night(seconds_of_day(series.local_seconds_at(t)));
    bool input_splice = false;
    while (next_input_splice != input_splices.end() && *next_input_splice < t) ++next_input_splice;
    if (next_input_splice != input_splices.end() && *next_input_splice == t) input_splice = true;

    auto& part = is_night ? night : day;
    auto& splices = is_night ? night_splices : day_splices;
    const int state = is_night ? 1 : 0;
    if (part.empty()) {
      (is_night ? night_first : day_first) = t;
    } else if (previous != state || input_splice) {
      splices.push_back(part.size());
    }
    part.push_back(values[t]);
    previous = state;
  }

  DayNightSplit out;
  const double dt = series.sample_interval();
  out.day = EnmoSeries(std::move(day), series.start_time().plus(static_cast<double>(day_first) * dt), dt,
                       std::move(day_splices));
  out.night = EnmoSeries(std::move(night), series.start_time().plus(static_cast<double>(night_first) * dt), dt,
                         std::move(night_splices));
  if (out.day.empty()) out.warnings.emplace_back("daytime partition is empty");
  if (out.night.empty()) out.warnings.emplace_back("nighttime partition is empty");
  return out;
}

DailyProfile daily_profile(const EnmoSeries& series, double bin_width) {
  if (!(bin_width > 0) || !std::isfinite(bin_width)) {
    throw InvalidParameter("daily_profile: bin width must be positive");
  }
  const double bins_real = kSecondsPerDay / bin_width;
  const double bins_rounded = std::round(bins_real);
  if (bins_rounded < 1 || std::abs(bins_real - bins_rounded) > 1e-9 * bins_real) {
    throw InvalidParameter("daily_profile: bin width must divide 86400 s");
  }
  if (series.empty()) throw EmptyData("daily_profile: empty series");

  const auto nbins = static_cast<std::size_t>(bins_rounded);
  DailyProfile p;
  p.bin_width = bin_width;
  p.means.assign(nbins, 0.0);
  p.counts.assign(nbins, 0);
  const auto values = series.values();
  for (std::size_t t = 0; t < values.size(); ++t) {
    auto b = static_cast<std::size_t>(seconds_of_day(series.local_seconds_at(t)) / bin_width);
    if (b >= nbins) b = nbins - 1;
    p.means[b] += values[t];
    ++p.counts[b];
  }
  for (std::size_t b = 0; b < nbins; ++b) {
    p.means[b] = p.counts[b] ? p.means[b] / static_cast<double>(p.counts[b])
                             : std::numeric_limits<double>::quiet_NaN();
  }
  return p;
}

}  // namespace actimetry

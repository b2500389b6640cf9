#include "actimetry/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string_view>

#include "actimetry/errors.hpp"

namespace actimetry {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::string lowercase(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

bool is_missing(std::string_view field) {
  return field.empty() || field == "NA" || field == "na" || field == "NaN" || field == "nan";
}

double parse_number(std::string_view field, std::size_t row) {
  double v = 0.0;
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (ec != std::errc() || ptr != end) {
    throw InputError("row " + std::to_string(row) + ": cannot parse number '" + std::string(field) + "'");
  }
  return v;
}

std::string offset_text(int seconds) {
  char buf[16];
  const int a = std::abs(seconds);
  std::snprintf(buf, sizeof buf, "%c%02d:%02d", seconds < 0 ? '-' : '+', a / 3600, (a / 60) % 60);
  return buf;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "NA";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

RecordingMetadata parse_metadata(std::istream& in) {
  RecordingMetadata meta;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto text = trim(line);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw InputError("metadata line " + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = lowercase(trim(text.substr(0, eq)));
    const std::string value(trim(text.substr(eq + 1)));
    if (key == "subject_id") {
      meta.subject_id = value;
    } else if (key == "group") {
      meta.group = Group::parse(value);
    } else if (key == "sample_interval") {
      const double dt = parse_number(value, lineno);
      if (!(dt > 0)) throw InputError("metadata: sample_interval must be positive");
      meta.sample_interval = dt;
    } else {
      meta.warnings.push_back("metadata key '" + key + "' ignored");
    }
  }
  return meta;
}

void write_metadata(std::ostream& out, const Recording& recording) {
  out << "subject_id=" << recording.subject_id() << '\n'
      << "group=" << recording.group().name() << '\n'
      << "sample_interval=" << format_number(recording.sample_interval()) << '\n';
}

Recording read_recording_csv(std::istream& in, const RecordingMetadata& metadata, const std::string& fallback_id) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("empty CSV: no header row");
  const auto header = split_commas(line);
  std::vector<std::string> cols;
  for (auto h : header) cols.push_back(lowercase(h));
  bool triaxial = false;
  if (cols == std::vector<std::string>{"timestamp", "x", "y", "z"}) {
    triaxial = true;
  } else if (cols != std::vector<std::string>{"timestamp", "enmo"}) {
    throw InputError("CSV header must be 'timestamp,x,y,z' or 'timestamp,enmo', got '" + line + "'");
  }
  const std::size_t width = cols.size();

  struct Row {
    Timestamp ts;
    std::optional<double> enmo;
  };
  std::vector<Row> rows;
  std::vector<std::string> warnings = metadata.warnings;
  std::size_t rowno = 1;
  while (std::getline(in, line)) {
    ++rowno;
    if (trim(line).empty()) continue;
    const auto fields = split_commas(line);
    if (fields.size() != width) {
      throw InputError("row " + std::to_string(rowno) + ": expected " + std::to_string(width) + " fields");
    }
    Row row{parse_iso8601(fields[0]), std::nullopt};
    const bool missing = std::any_of(fields.begin() + 1, fields.end(), is_missing);
    if (!missing) {
      if (triaxial) {
        row.enmo = compute_enmo(parse_number(fields[1], rowno), parse_number(fields[2], rowno),
                                parse_number(fields[3], rowno));
      } else {
        const double v = parse_number(fields[1], rowno);
        if (!std::isfinite(v) || v < 0) {
          throw InputError("row " + std::to_string(rowno) + ": ENMO must be finite and nonnegative");
        }
        row.enmo = v;
      }
    }
    rows.push_back(row);
  }
  if (rows.empty()) throw EmptyData("CSV has a header but no samples");

  double dt = 0.0;
  if (metadata.sample_interval) {
    dt = *metadata.sample_interval;
  } else {
    if (rows.size() < 2) throw InputError("cannot infer sample_interval from a single row");
    dt = rows[1].ts.unix_seconds - rows[0].ts.unix_seconds;
    if (!(dt > 0)) throw InputError("cannot infer sample_interval: timestamps not increasing");
    warnings.push_back("sample_interval inferred from the first two timestamps: " + format_number(dt) + " s");
  }

  std::vector<double> enmo;
  std::vector<IndexRange> gaps;
  enmo.reserve(rows.size());
  auto mark_missing = [&](std::size_t index) {
    if (!gaps.empty() && gaps.back().end == index) {
      gaps.back().end = index + 1;
    } else {
      gaps.push_back({index, index + 1});
    }
  };
  const int offset = rows.front().ts.utc_offset_seconds;
  bool offset_warned = false;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::size_t index = 0;
    if (i > 0) {
      const double step = rows[i].ts.unix_seconds - rows[i - 1].ts.unix_seconds;
      if (!(step > 0)) {
        throw InputError("timestamps must be strictly increasing (data row " + std::to_string(i + 1) + ")");
      }
      std::size_t advance = 1;
      if (step > 1.5 * dt) advance = static_cast<std::size_t>(std::llround(step / dt));
      index = enmo.size() - 1 + advance;
      while (enmo.size() < index) {
        mark_missing(enmo.size());
        enmo.push_back(0.0);
      }
    }
    if (rows[i].enmo) {
      enmo.push_back(*rows[i].enmo);
    } else {
      mark_missing(enmo.size());
      enmo.push_back(0.0);
    }
    if (!offset_warned && rows[i].ts.utc_offset_seconds != offset) {
      warnings.push_back("UTC offset changes from " + offset_text(offset) + " to " +
                         offset_text(rows[i].ts.utc_offset_seconds) + " at data row " + std::to_string(i + 1) +
                         "; local clock kept at the first offset");
      offset_warned = true;
    }
  }

  Recording rec(metadata.subject_id.value_or(fallback_id), metadata.group.value_or(Group::other("unlabeled")),
                rows.front().ts, dt, std::move(enmo), std::move(gaps));
  for (auto& w : warnings) rec.add_warning(std::move(w));
  return rec;
}

Recording load_recording(const std::filesystem::path& csv_path) {
  std::ifstream csv(csv_path);
  if (!csv) throw InputError("cannot open '" + csv_path.string() + "'");
  RecordingMetadata meta;
  auto meta_path = csv_path;
  meta_path.replace_extension(".meta");
  if (std::filesystem::exists(meta_path)) {
    std::ifstream m(meta_path);
    meta = parse_metadata(m);
  }
  return read_recording_csv(csv, meta, csv_path.stem().string());
}

void write_recording_csv(std::ostream& out, const Recording& recording) {
  out << "timestamp,enmo\n";
  const auto values = recording.enmo();
  const auto& gaps = recording.gaps();
  auto gap = gaps.begin();
  char buf[32];
  for (std::size_t t = 0; t < values.size(); ++t) {
    while (gap != gaps.end() && gap->end <= t) ++gap;
    const bool missing = gap != gaps.end() && gap->begin <= t;
    out << format_iso8601(recording.start_time().plus(static_cast<double>(t) * recording.sample_interval())) << ',';
    if (missing) {
      out << "NA\n";
    } else {
      std::snprintf(buf, sizeof buf, "%.10g", values[t]);
      out << buf << '\n';
    }
  }
}

void save_recording(const std::filesystem::path& dir, const Recording& recording) {
  std::filesystem::create_directories(dir);
  std::ofstream csv(dir / (recording.subject_id() + ".csv"));
  std::ofstream meta(dir / (recording.subject_id() + ".meta"));
  if (!csv || !meta) throw InputError("cannot write recording files under '" + dir.string() + "'");
  write_recording_csv(csv, recording);
  write_metadata(meta, recording);
}

void write_sweep_csv(std::ostream& out, const IvSweep& sweep) {
  out << "delta,interval_seconds,iv\n";
  for (std::size_t i = 0; i < sweep.deltas.size(); ++i) {
    out << sweep.deltas[i] << ',' << format_number(static_cast<double>(sweep.deltas[i]) * sweep.sample_interval) << ','
        << format_number(sweep.iv_values[i]) << '\n';
  }
}

void write_dfa_csv(std::ostream& out, const DfaFit& fit) {
  out << "log2_S,log2_F\n";
  for (std::size_t i = 0; i < fit.scales.size(); ++i) {
    out << format_number(std::log2(static_cast<double>(fit.scales[i]))) << ','
        << format_number(std::log2(fit.fluctuations[i])) << '\n';
  }
}

void write_spectrum_csv(std::ostream& out, const SpectralEstimate& estimate, double min_hz, double max_hz) {
  out << "frequency_hz,power_density\n";
  const auto ord = estimate.ordinates();
  for (std::size_t i = 0; i < ord.size(); ++i) {
    const double f = estimate.frequency(i);
    if (f < min_hz) continue;
    if (f > max_hz) break;
    out << format_number(f) << ',' << format_number(ord[i]) << '\n';
  }
}

void write_profile_csv(std::ostream& out, const DailyProfile& profile) {
  out << "bin_start_seconds,mean_enmo,count\n";
  for (std::size_t b = 0; b < profile.means.size(); ++b) {
    out << format_number(static_cast<double>(b) * profile.bin_width) << ',' << format_number(profile.means[b]) << ','
        << profile.counts[b] << '\n';
  }
}

}  // namespace actimetry

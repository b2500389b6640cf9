#include "actimetry/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

#include "json.hpp"

#include "actimetry/errors.hpp"
#include "actimetry/io.hpp"
#include "actimetry/time.hpp"
#include "parallel.hpp"

namespace actimetry {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::string_view status_name(RecordingStatus s) {
  switch (s) {
    case RecordingStatus::Ok: return "ok";
    case RecordingStatus::Partial: return "partial";
    case RecordingStatus::Failed: return "failed";
  }
  return "?";
}

std::vector<Metric> correlation_metrics() {
  return {Metric::IS, Metric::IV, Metric::AlphaOverall, Metric::PovF, Metric::PovH};
}

namespace {

template <typename Fn>
void attempt(RecordingResult& r, const char* what, Fn&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    r.errors.push_back(std::string(what) + ": " + e.what());
  }
}

void append_prefixed(std::vector<std::string>& out, const std::vector<std::string>& in, const std::string& prefix) {
  for (const auto& w : in) out.push_back(prefix + w);
}

}  // namespace

RecordingResult analyze_recording(const Recording& recording, const RunConfig& config, std::size_t workers) {
  const auto t0 = std::chrono::steady_clock::now();
  RecordingResult r;
  r.subject_id = recording.subject_id();
  r.group = recording.group();
  r.row.subject_id = r.subject_id;
  r.row.group = r.group;
  r.warnings = recording.warnings();

  EnmoSeries series;
  try {
    const Recording kept = exclude_missing_days(recording);
    r.provenance = kept.provenance();
    r.warnings = kept.warnings();
    series = kept.to_series();
  } catch (const std::exception& e) {
    r.status = RecordingStatus::Failed;
    r.errors.push_back(std::string("exclusion: ") + e.what());
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
  }
  r.n_samples = series.size();

  attempt(r, "IS", [&] {
    r.is = interdaily_stability(series, config.is_bin_seconds);
    r.row.set(Metric::IS, r.is->is_value);
  });
  attempt(r, "IV", [&] {
    r.iv = intradaily_variability(series, config.iv_delta);
    if (r.iv->degenerate_offsets > 0) {
      r.warnings.push_back("IV: " + std::to_string(r.iv->degenerate_offsets) + " of " +
                           std::to_string(config.iv_delta) + " offsets have a constant subseries and were skipped");
    }
    r.row.set(Metric::IV, r.iv->iv_value);
  });
  attempt(r, "IV sweep", [&] {
    const auto deltas = config.sweep_deltas();
    r.sweep = iv_sweep(series, deltas, workers);
    if (!r.sweep.omitted.empty()) {
      r.warnings.push_back("IV sweep: " + std::to_string(r.sweep.omitted.size()) + " delta(s) omitted, first " +
                           std::to_string(r.sweep.omitted.front().delta) + ": " + r.sweep.omitted.front().reason);
    }
  });
  const DfaConfig dfa_config = config.dfa_config();
  attempt(r, "alpha", [&] {
    r.dfa = dfa_alpha(series, dfa_config, workers);
    append_prefixed(r.warnings, r.dfa->warnings, "alpha: ");
    r.row.set(Metric::AlphaOverall, r.dfa->alpha);
  });
  attempt(r, "day/night split", [&] {
    auto split = split_day_night(series, config.schedule());
    append_prefixed(r.warnings, split.warnings, "");
    attempt(r, "alpha_day", [&] {
      r.dfa_day = dfa_alpha(split.day, dfa_config, workers);
      append_prefixed(r.warnings, r.dfa_day->warnings, "alpha_day: ");
      r.row.set(Metric::AlphaDay, r.dfa_day->alpha);
    });
    attempt(r, "alpha_night", [&] {
      r.dfa_night = dfa_alpha(split.night, dfa_config, workers);
      append_prefixed(r.warnings, r.dfa_night->warnings, "alpha_night: ");
      r.row.set(Metric::AlphaNight, r.dfa_night->alpha);
    });
  });
  attempt(r, "PoV", [&] {
    if (series.duration_seconds() < 2.0 * kSecondsPerDay - 1e-6) {
      throw DurationError("series must span at least two days");
    }
    PovOptions options = config.pov_options();
    if (options.zero_pad_factor == 0) {
      options.zero_pad_factor = minimum_zero_pad_factor(series.size(), series.sample_interval(), options.band_lo_hz,
                                                        options.band_hi_hz, options.resolution);
    }
    const SpectralEstimate estimate = periodogram(series, options.zero_pad_factor);
    r.pov = pov(estimate, options);
    r.row.set(Metric::PovF, r.pov->pov_fundamental);
    r.row.set(Metric::PovH, r.pov->pov_harmonic);
    const auto ord = estimate.ordinates();
    for (std::size_t i = 0; i < ord.size() && estimate.frequency(i) <= config.spectrum_max_hz; ++i) {
      r.spectrum_frequencies.push_back(estimate.frequency(i));
      r.spectrum_density.push_back(ord[i]);
    }
  });
  attempt(r, "cosinor", [&] {
    r.cosinor = cosinor(series);
    r.row.set(Metric::CosinorR2, r.cosinor->r_squared);
  });
  attempt(r, "profile", [&] { r.profile = daily_profile(series, config.profile_bin_seconds); });

  if (!r.errors.empty()) r.status = RecordingStatus::Partial;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

CohortAnalysis analyze_cohort(const std::vector<RecordingResult>& results, const RunConfig& config) {
  CohortAnalysis out;
  out.table = MetricTable(config_hash(config));
  for (const auto& r : results) {
    if (r.status != RecordingStatus::Failed) out.table.add(r.row);
  }
  if (out.table.empty()) return out;
  out.summaries = summarize(out.table);

  // Groups in display order, with the pooled dementia pseudo-group.
  std::map<std::string, std::vector<const MetricRow*>, decltype(&group_name_less)> groups(&group_name_less);
  for (const auto& row : out.table.rows()) {
    groups[row.group.name()].push_back(&row);
    if (row.group.has_dementia()) groups["dementia"].push_back(&row);
  }
  std::vector<std::string> names;
  for (const auto& [name, rows] : groups) names.push_back(name);

  auto column = [&](const std::string& g, Metric m) {
    std::vector<double> v;
    for (const auto* row : groups.at(g)) {
      if (auto x = row->get(m)) v.push_back(*x);
    }
    return v;
  };
  auto add_test = [&](const std::string& a, const std::string& b, const std::string& label, std::vector<double> xa,
                      std::vector<double> xb) {
    GroupTest t{a, b, label, std::nullopt, {}};
    try {
      if (xa.empty() || xb.empty()) throw EmptyData("a group has no values");
      t.result = mann_whitney_u(xa, xb, Alternative::TwoSided);
    } catch (const std::exception& e) {
      t.error = e.what();
    }
    out.tests.push_back(std::move(t));
  };

  // Every pair of real groups; the pooled group only against without-dementia,
  // and only when it differs from its single member.
  const bool pooled_distinct = groups.count("dementia") && groups.at("dementia").size() > 0 &&
                               groups.count("non-intervention") + groups.count("intervention") > 1;
  for (Metric m : kAllMetrics) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      for (std::size_t j = i + 1; j < names.size(); ++j) {
        if (names[i] == "dementia" || names[j] == "dementia") continue;
        add_test(names[i], names[j], std::string(metric_name(m)), column(names[i], m), column(names[j], m));
      }
    }
    if (pooled_distinct && groups.count("without-dementia")) {
      add_test("dementia", "without-dementia", std::string(metric_name(m)), column("dementia", m),
               column("without-dementia", m));
    }
  }
  for (const auto& g : names) {
    if (g == "dementia" && !pooled_distinct) continue;
    add_test(g, g, "alpha_day-vs-alpha_night", column(g, Metric::AlphaDay), column(g, Metric::AlphaNight));
  }

  const auto metrics = correlation_metrics();
  std::vector<RowFilter> filters{RowFilter::all()};
  if (pooled_distinct) filters.push_back(RowFilter::dementia());
  for (const auto& g : names) {
    if (g == "dementia") continue;
    filters.push_back(RowFilter::exact(groups.at(g).front()->group));
  }
  for (const auto& f : filters) {
    try {
      out.correlations.push_back(metric_correlations(out.table, metrics, f));
    } catch (const std::exception& e) {
      out.correlation_omissions.push_back(f.name() + ": " + e.what());
    }
  }

  // Sweep tables over recordings that have a full sweep.
  std::vector<const RecordingResult*> swept;
  for (const auto& r : results) {
    if (r.status != RecordingStatus::Failed && !r.sweep.deltas.empty()) swept.push_back(&r);
  }
  if (!swept.empty()) {
    std::vector<DeltaTable> tables;
    for (std::size_t delta : config.sweep_deltas()) {
      DeltaTable dt{delta, MetricTable(out.table.config_hash())};
      for (const auto* r : swept) {
        MetricRow row = r->row;
        const auto& d = r->sweep.deltas;
        auto it = std::lower_bound(d.begin(), d.end(), delta);
        std::optional<double> iv;
        if (it != d.end() && *it == delta) iv = r->sweep.iv_values[static_cast<std::size_t>(it - d.begin())];
        row.set(Metric::IV, iv);
        dt.table.add(std::move(row));
      }
      tables.push_back(std::move(dt));
    }
    out.sweep_correlations = iv_sweep_correlations(tables);
  }

  for (const auto& g : names) {
    GroupProfile gp;
    gp.group = g;
    gp.bin_width = config.profile_bin_seconds;
    for (const auto& r : results) {
      if (!r.profile) continue;
      const bool member = g == "dementia" ? r.group.has_dementia() : r.group.name() == g;
      if (!member) continue;
      const auto& p = *r.profile;
      if (gp.means.empty()) {
        gp.means.assign(p.means.size(), 0.0);
        gp.recordings.assign(p.means.size(), 0);
      }
      for (std::size_t b = 0; b < p.means.size() && b < gp.means.size(); ++b) {
        if (std::isnan(p.means[b])) continue;
        gp.means[b] += p.means[b];
        ++gp.recordings[b];
      }
    }
    for (std::size_t b = 0; b < gp.means.size(); ++b) {
      gp.means[b] = gp.recordings[b] ? gp.means[b] / static_cast<double>(gp.recordings[b]) : std::nan("");
    }
    if (!gp.means.empty()) out.profiles.push_back(std::move(gp));
  }
  return out;
}

std::vector<fs::path> discover_inputs(const std::vector<std::string>& inputs) {
  std::vector<fs::path> files;
  for (const auto& in : inputs) {
    const fs::path p(in);
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto& entry : fs::directory_iterator(p)) {
        if (entry.is_regular_file() && entry.path().extension() == ".csv") found.push_back(entry.path());
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.push_back(p);
    }
  }
  return files;
}

namespace {

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json fit_json(const DfaFit& fit) {
  json j;
  j["alpha"] = fit.alpha;
  j["intercept_log2"] = fit.intercept;
  j["r_squared"] = fit.r_squared;
  j["scales"] = fit.scales;
  return j;
}

json recording_json(const RecordingResult& r) {
  json j;
  j["subject_id"] = r.subject_id;
  j["group"] = r.group.name();
  j["source"] = r.source;
  j["status"] = status_name(r.status);
  j["errors"] = r.errors;
  j["warnings"] = r.warnings;
  j["n_samples"] = r.n_samples;
  j["retained_days"] = r.provenance.retained_days;
  j["dropped_days"] = r.provenance.dropped_days;
  j["splices"] = r.provenance.splices;
  json metrics;
  for (Metric m : kAllMetrics) metrics[std::string(metric_name(m))] = optional_number(r.row.get(m));
  j["metrics"] = metrics;
  if (r.iv) {
    j["iv"] = {{"delta", r.iv->delta}, {"m", r.iv->m}, {"degenerate_offsets", r.iv->degenerate_offsets}};
  }
  if (r.dfa) j["dfa"] = fit_json(*r.dfa);
  if (r.dfa_day) j["dfa_day"] = fit_json(*r.dfa_day);
  if (r.dfa_night) j["dfa_night"] = fit_json(*r.dfa_night);
  if (r.pov) {
    j["pov"] = {{"zero_pad_factor", r.pov->zero_pad_factor}, {"k_max", r.pov->k_max}, {"per_band", r.pov->per_band}};
  }
  if (r.cosinor) {
    j["cosinor"] = {{"mesor", r.cosinor->mesor},
                    {"amplitude", r.cosinor->amplitude},
                    {"acrophase_rad", r.cosinor->acrophase},
                    {"r_squared", r.cosinor->r_squared}};
  }
  return j;
}

json config_json(const RunConfig& c) {
  json j;
  j["inputs"] = c.inputs;
  j["iv_delta"] = c.iv_delta;
  j["iv_sweep"] = {c.iv_sweep_min, c.iv_sweep_max};
  j["dfa_exponents"] = {{"min", c.dfa_exponent_min}, {"max", c.dfa_exponent_max}, {"step", c.dfa_exponent_step}};
  j["night_hours"] = {c.night_start_hour, c.night_end_hour};
  j["pov_k_max"] = c.pov_k_max;
  j["band_hz"] = {c.band_lo_hz, c.band_hi_hz};
  j["zero_pad_factor"] = c.zero_pad_factor;
  j["pad_resolution"] = c.pad_resolution;
  j["is_bin_seconds"] = c.is_bin_seconds;
  j["profile_bin_seconds"] = c.profile_bin_seconds;
  j["spectrum_max_hz"] = c.spectrum_max_hz;
  j["seed"] = c.seed;
  return j;
}

json cohort_json(const CohortAnalysis& c) {
  json j;
  json summaries = json::object();
  for (const auto& s : c.summaries) {
    summaries[s.group][std::string(metric_name(s.metric))] = {
        {"n", s.n}, {"mean", s.mean}, {"sd", optional_number(s.sd)}, {"min", s.min}, {"max", s.max}};
  }
  j["summaries"] = summaries;
  json tests = json::array();
  for (const auto& t : c.tests) {
    json tj;
    tj["pair"] = {t.group_a, t.group_b};
    tj["metric"] = t.metric;
    if (t.result) {
      tj["U"] = t.result->u_statistic;
      tj["p"] = t.result->p_value;
      tj["method"] = method_name(t.result->method);
      tj["n1"] = t.result->n1;
      tj["n2"] = t.result->n2;
      tj["alternative"] = alternative_name(t.result->alternative);
    } else {
      tj["error"] = t.error;
    }
    tests.push_back(tj);
  }
  j["tests"] = tests;
  json corr = json::array();
  for (const auto& m : c.correlations) {
    corr.push_back({{"filter", m.filter}, {"n_rows", m.n_rows}, {"labels", m.labels}, {"values", m.values}});
  }
  j["correlations"] = corr;
  j["correlation_omissions"] = c.correlation_omissions;
  json omitted = json::array();
  for (const auto& o : c.sweep_correlations.omitted) {
    omitted.push_back({{"delta", o.delta}, {"filter", o.filter}, {"metric", metric_name(o.metric)}, {"reason", o.reason}});
  }
  j["sweep_correlation_omissions"] = omitted;
  return j;
}

std::ofstream open_output(const fs::path& path) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  return out;
}

// Keeps artifact names inside their directory.
std::string safe_name(const std::string& id) {
  std::string s = id;
  for (char& ch : s) {
    if (ch == '/' || ch == '\\' || ch == ':') ch = '_';
  }
  return s;
}

}  // namespace

int run_pipeline(const RunConfig& config, std::ostream& log) {
  config.validate();
  const auto files = discover_inputs(config.inputs);
  if (files.empty()) {
    log << "no recordings\n";
    return 2;
  }

  const std::size_t outer = detail::resolve_workers(config.workers, files.size());
  const std::size_t inner = files.size() == 1 ? detail::resolve_workers(config.workers, 1000) : 1;
  std::vector<RecordingResult> results(files.size());
  detail::parallel_for(files.size(), outer, [&](std::size_t i) {
    try {
      const Recording rec = load_recording(files[i]);
      results[i] = analyze_recording(rec, config, inner);
    } catch (const std::exception& e) {
      results[i] = RecordingResult{};
      results[i].subject_id = files[i].stem().string();
      results[i].group = Group::other("unlabeled");
      results[i].status = RecordingStatus::Failed;
      results[i].errors.push_back(std::string("load: ") + e.what());
    }
    results[i].source = files[i].string();
  });

  std::stable_sort(results.begin(), results.end(), [](const RecordingResult& a, const RecordingResult& b) {
    return a.subject_id != b.subject_id ? a.subject_id < b.subject_id : a.source < b.source;
  });
  for (std::size_t i = 1; i < results.size(); ++i) {
    if (results[i].subject_id == results[i - 1].subject_id && results[i].status != RecordingStatus::Failed) {
      results[i].status = RecordingStatus::Failed;
      results[i].errors.push_back("duplicate subject_id '" + results[i].subject_id + "' (first seen in " +
                                  results[i - 1].source + ")");
    }
  }

  const CohortAnalysis cohort = analyze_cohort(results, config);

  const fs::path dir(config.output_dir);
  fs::create_directories(dir);
  {
    json report;
    report["config_hash"] = config_hash(config);
    report["config"] = config_json(config);
    json recs = json::array();
    for (const auto& r : results) recs.push_back(recording_json(r));
    report["recordings"] = recs;
    report["cohort"] = cohort_json(cohort);
    auto out = open_output(dir / "report.json");
    out << report.dump(2) << '\n';
  }
  {
    auto out = open_output(dir / "config.txt");
    out << serialize(config);
  }
  {
    auto out = open_output(dir / "manifest.csv");
    out << "subject_id,group,source,status,message\n";
    for (const auto& r : results) {
      std::string msg;
      for (const auto& e : r.errors) msg += (msg.empty() ? "" : "; ") + e;
      std::replace(msg.begin(), msg.end(), '"', '\'');
      out << r.subject_id << ',' << r.group.name() << ',' << r.source << ',' << status_name(r.status) << ",\"" << msg
          << "\"\n";
    }
  }
  {
    auto out = open_output(dir / "metrics.csv");
    out << "subject_id,group";
    for (Metric m : kAllMetrics) out << ',' << metric_name(m);
    out << '\n';
    for (const auto& r : results) {
      if (r.status == RecordingStatus::Failed) continue;
      out << r.subject_id << ',' << r.group.name();
      for (Metric m : kAllMetrics) {
        auto v = r.row.get(m);
        out << ',' << (v ? format_number(*v) : "NA");
      }
      out << '\n';
    }
  }
  for (const auto& r : results) {
    if (r.status == RecordingStatus::Failed) continue;
    const std::string name = safe_name(r.subject_id) + ".csv";
    if (!r.sweep.deltas.empty()) {
      auto out = open_output(dir / "sweep" / name);
      write_sweep_csv(out, r.sweep);
    }
    if (r.dfa) {
      auto out = open_output(dir / "dfa" / name);
      write_dfa_csv(out, *r.dfa);
    }
    if (!r.spectrum_frequencies.empty()) {
      auto out = open_output(dir / "spectrum" / name);
      out << "frequency_hz,power_density\n";
      for (std::size_t i = 0; i < r.spectrum_frequencies.size(); ++i) {
        out << format_number(r.spectrum_frequencies[i]) << ',' << format_number(r.spectrum_density[i]) << '\n';
      }
    }
    if (r.profile) {
      auto out = open_output(dir / "profile" / name);
      write_profile_csv(out, *r.profile);
    }
  }
  {
    auto out = open_output(dir / "sweep_correlations.csv");
    out << "delta,interval_seconds,filter,metric,r\n";
    const double dt = results.empty() ? 0.0 : [&] {
      for (const auto& r : results) {
        if (!r.sweep.deltas.empty()) return r.sweep.sample_interval;
      }
      return 0.0;
    }();
    for (const auto& p : cohort.sweep_correlations.points) {
      out << p.delta << ',' << format_number(static_cast<double>(p.delta) * dt) << ',' << p.filter << ','
          << metric_name(p.metric) << ',' << format_number(p.r) << '\n';
    }
  }
  {
    auto out = open_output(dir / "group_profiles.csv");
    out << "group,bin_start_seconds,mean_enmo,n_recordings\n";
    for (const auto& gp : cohort.profiles) {
      for (std::size_t b = 0; b < gp.means.size(); ++b) {
        out << gp.group << ',' << format_number(static_cast<double>(b) * gp.bin_width) << ','
            << format_number(gp.means[b]) << ',' << gp.recordings[b] << '\n';
      }
    }
  }
  {
    auto out = open_output(dir / "timing.csv");
    out << "subject_id,seconds\n";
    for (const auto& r : results) out << r.subject_id << ',' << format_number(r.seconds) << '\n';
  }

  std::size_t failed = 0, partial = 0;
  for (const auto& r : results) {
    if (r.status == RecordingStatus::Failed) ++failed;
    if (r.status == RecordingStatus::Partial) ++partial;
    for (const auto& e : r.errors) log << r.subject_id << ": " << e << '\n';
  }
  log << results.size() << " recording(s): " << results.size() - failed - partial << " ok, " << partial
      << " partial, " << failed << " failed; output in " << dir.string() << '\n';
  if (failed == results.size()) return 2;
  return failed + partial > 0 ? 1 : 0;
}

}  // namespace actimetry

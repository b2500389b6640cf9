#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "actimetry/circadian.hpp"
#include "actimetry/config.hpp"
#include "actimetry/errors.hpp"
#include "actimetry/io.hpp"
#include "actimetry/pipeline.hpp"
#include "actimetry/spectral.hpp"
#include "actimetry/synth.hpp"

namespace {

using namespace actimetry;

constexpr const char* kOutputEnv = "ACTIMETRY_OUTPUT_DIR";

std::string flag_name(const std::string& key) {
  std::string s = "--" + key;
  for (char& c : s) {
    if (c == '_') c = '-';
  }
  return s;
}

// One `--key` option per RunConfig field, plus --config.
struct ConfigFlags {
  std::string config_path;
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;

  void attach(CLI::App& app, bool short_output = false) {
    app.add_option("--config", config_path, "key=value config file")->check(CLI::ExistingFile);
    for (const auto& key : setting_keys()) {
      if (key == "inputs") continue;
      const std::string name = (short_output && key == "output_dir" ? "-o," : "") + flag_name(key);
      options[key] = app.add_option(name, values[key], "config key " + key);
    }
  }

  // config file < environment < flags
  RunConfig resolve(const std::vector<std::string>& positional_inputs) const {
    RunConfig config = config_path.empty() ? RunConfig{} : load_config(config_path);
    if (const char* env = std::getenv(kOutputEnv); env && *env) config.output_dir = env;
    for (const auto& [key, opt] : options) {
      if (opt->count() > 0) apply_setting(config, key, values.at(key));
    }
    if (!positional_inputs.empty()) config.inputs = positional_inputs;
    config.validate();
    return config;
  }
};

Recording load_series_input(const std::string& path) { return exclude_missing_days(load_recording(path)); }

template <typename Fn>
void with_output(const std::string& path, Fn&& fn) {
  if (path.empty() || path == "-") {
    fn(std::cout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  fn(out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Circadian and fractal summary statistics for accelerometry recordings"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Analyze recordings and write reports");
  std::vector<std::string> run_inputs;
  ConfigFlags run_flags;
  run->add_option("inputs", run_inputs, "CSV files or directories of CSV files");
  run_flags.attach(*run, true);

  auto* synth = app.add_subcommand("synth", "Write synthetic recordings");
  std::string preset, recipe_path, synth_out;
  std::optional<std::uint64_t> synth_seed;
  std::optional<double> synth_days, synth_interval;
  auto* preset_opt = synth->add_option("--preset", preset, "pure-sine, square, white-noise, pink-noise or cohort");
  auto* recipe_opt = synth->add_option("--recipe", recipe_path, "recipe file")->check(CLI::ExistingFile);
  preset_opt->excludes(recipe_opt);
  synth->add_option("-o,--output-dir", synth_out, "directory for the CSV and .meta files");
  synth->add_option("--seed", synth_seed, "overrides the recipe seed");
  synth->add_option("--days", synth_days, "overrides the recipe length");
  synth->add_option("--sample-interval", synth_interval, "overrides the recipe sampling interval (s)");

  auto* sweep = app.add_subcommand("sweep", "IV over a range of subsampling factors for one recording");
  std::string sweep_input;
  std::string sweep_csv;
  ConfigFlags sweep_flags;
  sweep->add_option("input", sweep_input, "recording CSV")->required();
  sweep->add_option("--csv", sweep_csv, "output file (default stdout)");
  sweep_flags.attach(*sweep);

  auto* spectrum = app.add_subcommand("spectrum", "Periodogram of one recording");
  std::string spectrum_input;
  std::string spectrum_csv;
  ConfigFlags spectrum_flags;
  spectrum->add_option("input", spectrum_input, "recording CSV")->required();
  spectrum->add_option("--csv", spectrum_csv, "output file (default stdout)");
  spectrum_flags.attach(*spectrum);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*run) {
      const RunConfig config = run_flags.resolve(run_inputs);
      return run_pipeline(config, std::cerr);
    }
    if (*synth) {
      if (preset.empty() && recipe_path.empty()) throw InvalidParameter("synth needs --preset or --recipe");
      CohortRecipe recipe;
      if (!preset.empty()) {
        recipe = preset_recipe(preset);
      } else {
        std::ifstream in(recipe_path);
        recipe = parse_recipe(in);
      }
      if (synth_seed) recipe.seed = *synth_seed;
      if (synth_days) recipe.days = *synth_days;
      if (synth_interval) recipe.sample_interval = *synth_interval;
      std::string dir = synth_out;
      if (dir.empty()) {
        const char* env = std::getenv(kOutputEnv);
        dir = env && *env ? env : "synthetic";
      }
      const auto recordings = synthesize(recipe);
      for (const auto& r : recordings) save_recording(dir, r);
      std::cerr << recordings.size() << " recording(s) written to " << dir << '\n';
      return 0;
    }
    if (*sweep) {
      const RunConfig config = sweep_flags.resolve({});
      const Recording rec = load_series_input(sweep_input);
      const auto deltas = config.sweep_deltas();
      const IvSweep result = iv_sweep(rec.to_series(), deltas, config.workers ? config.workers : 1);
      for (const auto& o : result.omitted) std::cerr << "delta " << o.delta << " omitted: " << o.reason << '\n';
      with_output(sweep_csv, [&](std::ostream& out) { write_sweep_csv(out, result); });
      return result.omitted.empty() ? 0 : 1;
    }
    if (*spectrum) {
      const RunConfig config = spectrum_flags.resolve({});
      const EnmoSeries series = load_series_input(spectrum_input).to_series();
      PovOptions options = config.pov_options();
      if (options.zero_pad_factor == 0) {
        options.zero_pad_factor = minimum_zero_pad_factor(series.size(), series.sample_interval(), options.band_lo_hz,
                                                          options.band_hi_hz, options.resolution);
      }
      const SpectralEstimate estimate = periodogram(series, options.zero_pad_factor);
      with_output(spectrum_csv, [&](std::ostream& out) { write_spectrum_csv(out, estimate, 0.0, config.spectrum_max_hz); });
      try {
        const PovResult p = pov(estimate, options);
        std::cerr << "zero_pad_factor=" << options.zero_pad_factor << " PoV_F=" << format_number(p.pov_fundamental)
                  << " PoV_H=" << format_number(p.pov_harmonic) << '\n';
      } catch (const Error& e) {
        std::cerr << "PoV unavailable: " << e.what() << '\n';
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

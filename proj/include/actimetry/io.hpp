#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "actimetry/circadian.hpp"
#include "actimetry/dfa.hpp"
#include "actimetry/series.hpp"
#include "actimetry/spectral.hpp"

namespace actimetry {

/// Sidecar `key=value` file next to each recording CSV.
struct RecordingMetadata {
  std::optional<std::string> subject_id;
  std::optional<Group> group;
  std::optional<double> sample_interval;
  std::vector<std::string> warnings;  // unrecognised keys
};

RecordingMetadata parse_metadata(std::istream& in);
void write_metadata(std::ostream& out, const Recording& recording);

/// Reads `timestamp,x,y,z` or `timestamp,enmo` rows (header required).
///
/// Rows are placed on the regular grid anchored at the first timestamp; a jump
/// larger than 1.5 sample intervals opens a gap, and empty or `NA` values are
/// treated as missing. The first row's UTC offset defines the local clock; an
/// offset change (e.g. daylight saving) is accepted with a warning.
Recording read_recording_csv(std::istream& in, const RecordingMetadata& metadata, const std::string& fallback_id);

/// Reads `path` and, when present, the sidecar `path` with extension `.meta`.
Recording load_recording(const std::filesystem::path& csv_path);

/// Writes `timestamp,enmo`.
void write_recording_csv(std::ostream& out, const Recording& recording);
/// Writes `<dir>/<subject>.csv` and `<dir>/<subject>.meta`.
void save_recording(const std::filesystem::path& dir, const Recording& recording);

void write_sweep_csv(std::ostream& out, const IvSweep& sweep);
void write_dfa_csv(std::ostream& out, const DfaFit& fit);
/// `frequency_hz,power_density` for grid frequencies in [min_hz, max_hz].
void write_spectrum_csv(std::ostream& out, const SpectralEstimate& estimate, double min_hz, double max_hz);
void write_profile_csv(std::ostream& out, const DailyProfile& profile);

/// printf("%.17g") without locale surprises; NaN prints as "NA".
std::string format_number(double v);

}  // namespace actimetry

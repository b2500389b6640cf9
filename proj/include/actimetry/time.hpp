#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace actimetry {

inline constexpr double kSecondsPerDay = 86400.0;

/// An instant plus the UTC offset it was reported in. The offset defines the
/// local wall clock used for hour-of-day and calendar-day logic.
struct Timestamp {
  double unix_seconds = 0.0;
  int utc_offset_seconds = 0;

  [[nodiscard]] double local_seconds() const { return unix_seconds + utc_offset_seconds; }
  [[nodiscard]] Timestamp plus(double seconds) const {
    return Timestamp{unix_seconds + seconds, utc_offset_seconds};
  }
  friend bool operator==(const Timestamp&, const Timestamp&) = default;
};

/// Parses `YYYY-MM-DDTHH:MM:SS[.frac](Z|+HH:MM|-HH:MM)`. A space is accepted in
/// place of `T`. The offset is mandatory. Throws InputError.
Timestamp parse_iso8601(std::string_view text);

/// Inverse of parse_iso8601; fractional seconds are printed only when present.
std::string format_iso8601(const Timestamp& ts);

/// Seconds since local midnight, in [0, 86400).
double seconds_of_day(double local_seconds);

/// Local calendar day number (days since 1970-01-01 on the local clock).
std::int64_t local_day_number(double local_seconds);

}  // namespace actimetry

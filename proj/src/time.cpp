#include "actimetry/time.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>

#include "actimetry/errors.hpp"

namespace actimetry {

namespace {

int parse_digits(std::string_view text, std::size_t pos, std::size_t count) {
  if (pos + count > text.size()) throw InputError("timestamp truncated: '" + std::string(text) + "'");
  int value = 0;
  for (std::size_t i = pos; i < pos + count; ++i) {
    const char c = text[i];
    if (c < '0' || c > '9') throw InputError("bad digit in timestamp: '" + std::string(text) + "'");
    value = value * 10 + (c - '0');
  }
  return value;
}

void expect(std::string_view text, std::size_t pos, char c) {
  if (pos >= text.size() || text[pos] != c) {
    throw InputError("malformed timestamp: '" + std::string(text) + "'");
  }
}

}  // namespace

Timestamp parse_iso8601(std::string_view text) {
  using namespace std::chrono;
  while (!text.empty() && (text.back() == ' ' || text.back() == '\r')) text.remove_suffix(1);
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);

  const int year = parse_digits(text, 0, 4);
  expect(text, 4, '-');
  const int month = parse_digits(text, 5, 2);
  expect(text, 7, '-');
  const int day = parse_digits(text, 8, 2);
  if (text.size() <= 10 || (text[10] != 'T' && text[10] != ' ')) {
    throw InputError("timestamp missing time part: '" + std::string(text) + "'");
  }
  const int hour = parse_digits(text, 11, 2);
  expect(text, 13, ':');
  const int minute = parse_digits(text, 14, 2);
  expect(text, 16, ':');
  const int second = parse_digits(text, 17, 2);

  std::size_t pos = 19;
  double fraction = 0.0;
  if (pos < text.size() && (text[pos] == '.' || text[pos] == ',')) {
    ++pos;
    double scale = 0.1;
    const std::size_t start = pos;
    while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
      fraction += scale * (text[pos] - '0');
      scale *= 0.1;
      ++pos;
    }
    if (pos == start) throw InputError("empty fractional seconds: '" + std::string(text) + "'");
  }

  int offset = 0;
  if (pos >= text.size()) {
    throw InputError("timestamp missing UTC offset: '" + std::string(text) + "'");
  }
  if (text[pos] == 'Z') {
    ++pos;
  } else if (text[pos] == '+' || text[pos] == '-') {
    const int sign = text[pos] == '-' ? -1 : 1;
    const int oh = parse_digits(text, pos + 1, 2);
    std::size_t mpos = pos + 3;
    if (mpos < text.size() && text[mpos] == ':') ++mpos;
    const int om = parse_digits(text, mpos, 2);
    pos = mpos + 2;
    if (oh > 23 || om > 59) throw InputError("bad UTC offset: '" + std::string(text) + "'");
    offset = sign * (oh * 3600 + om * 60);
  } else {
    throw InputError("malformed UTC offset: '" + std::string(text) + "'");
  }
  if (pos != text.size()) throw InputError("trailing characters in timestamp: '" + std::string(text) + "'");

  const year_month_day ymd{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
                           std::chrono::day{static_cast<unsigned>(day)}};
  if (!ymd.ok() || hour > 23 || minute > 59 || second > 60) {
    throw InputError("timestamp out of range: '" + std::string(text) + "'");
  }
  const auto days = sys_days{ymd}.time_since_epoch().count();
  const double local = static_cast<double>(days) * kSecondsPerDay + hour * 3600.0 + minute * 60.0 +
                       second + fraction;
  return Timestamp{local - offset, offset};
}

std::string format_iso8601(const Timestamp& ts) {
  using namespace std::chrono;
  const double local = ts.local_seconds();
  const auto day_number = local_day_number(local);
  const year_month_day ymd{sys_days{days{day_number}}};
  const double sod = seconds_of_day(local);
  const int whole = static_cast<int>(std::floor(sod));
  const double frac = sod - whole;

  char buf[64];
  int n = std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d", static_cast<int>(ymd.year()),
                        static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), whole / 3600,
                        (whole / 60) % 60, whole % 60);
  std::string out(buf, static_cast<std::size_t>(n));
  if (frac > 5e-7) {
    n = std::snprintf(buf, sizeof buf, "%.6f", frac);
    std::string f(buf + 1, static_cast<std::size_t>(n - 1));  // drop leading 0
    while (f.back() == '0') f.pop_back();
    out += f;
  }
  const int off = ts.utc_offset_seconds;
  const int aoff = off < 0 ? -off : off;
  n = std::snprintf(buf, sizeof buf, "%c%02d:%02d", off < 0 ? '-' : '+', aoff / 3600, (aoff / 60) % 60);
  out.append(buf, static_cast<std::size_t>(n));
  return out;
}

double seconds_of_day(double local_seconds) {
  double r = std::fmod(local_seconds, kSecondsPerDay);
  if (r < 0) r += kSecondsPerDay;
  if (r >= kSecondsPerDay) r = 0.0;
  return r;
}

std::int64_t local_day_number(double local_seconds) {
  return static_cast<std::int64_t>(std::floor(local_seconds / kSecondsPerDay));
}

}  // namespace actimetry

#include <cmath>
#include <algorithm>
#include <sstream>

#include "doctest.h"

#include "actimetry/config.hpp"
#include "actimetry/errors.hpp"
#include "actimetry/io.hpp"

using namespace actimetry;

namespace {

Recording read(const std::string& csv, const std::string& meta = "") {
  std::istringstream m(meta);
  std::istringstream in(csv);
  return read_recording_csv(in, parse_metadata(m), "fallback");
}

}  // namespace

TEST_CASE("metadata parsing") {
  std::istringstream in("# comment\nsubject_id = p7\ngroup=intervention\nsample_interval=5\ncolour=blue\n");
  auto m = parse_metadata(in);
  CHECK(*m.subject_id == "p7");
  CHECK(*m.group == Group::intervention());
  CHECK(*m.sample_interval == 5.0);
  CHECK(m.warnings.size() == 1);
  std::istringstream bad("novalue\n");
  CHECK_THROWS_AS((void)parse_metadata(bad), InputError);
  std::istringstream neg("sample_interval=-1\n");
  CHECK_THROWS_AS((void)parse_metadata(neg), InputError);
}

TEST_CASE("triaxial and enmo csv") {
  auto r = read("timestamp,x,y,z\n2024-01-01T00:00:00Z,3,0,4\n2024-01-01T00:00:05Z,1,0,0\n",
                "subject_id=s\ngroup=without-dementia\nsample_interval=5\n");
  CHECK(r.subject_id() == "s");
  CHECK(r.group() == Group::without_dementia());
  REQUIRE(r.size() == 2);
  CHECK(r.enmo()[0] == doctest::Approx(4.0));
  CHECK(r.enmo()[1] == 0.0);
  CHECK(r.warnings().empty());

  auto e = read("timestamp,enmo\n2024-01-01T00:00:00Z,0.5\n2024-01-01T00:00:05Z,0.25\n");
  CHECK(e.subject_id() == "fallback");
  CHECK(e.group().name() == "unlabeled");
  CHECK(e.sample_interval() == 5.0);
  CHECK_FALSE(e.warnings().empty());
}

TEST_CASE("gaps from missing values and timestamp jumps") {
  auto r = read(
      "timestamp,enmo\n"
      "2024-01-01T00:00:00Z,1\n"
      "2024-01-01T00:00:05Z,NA\n"
      "2024-01-01T00:00:10Z,\n"
      "2024-01-01T00:00:15Z,2\n"
      "2024-01-01T00:00:35Z,3\n"
      "2024-01-01T00:00:41Z,4\n",
      "sample_interval=5\n");
  REQUIRE(r.size() == 9);
  CHECK(r.gaps() == std::vector<IndexRange>{{1, 3}, {4, 7}});
  CHECK(r.enmo()[3] == 2.0);
  CHECK(r.enmo()[7] == 3.0);
  // a 6 s step is within 1.5 intervals: next slot, no gap
  CHECK(r.enmo()[8] == 4.0);
}

TEST_CASE("csv errors and warnings") {
  CHECK_THROWS_AS((void)read(""), InputError);
  CHECK_THROWS_AS((void)read("time,value\n"), InputError);
  CHECK_THROWS_AS((void)read("timestamp,enmo\n"), EmptyData);
  CHECK_THROWS_AS((void)read("timestamp,enmo\n2024-01-01T00:00:00Z,1,2\n", "sample_interval=5"), InputError);
  CHECK_THROWS_AS((void)read("timestamp,enmo\n2024-01-01T00:00:00Z,abc\n", "sample_interval=5"), InputError);
  CHECK_THROWS_AS((void)read("timestamp,enmo\n2024-01-01T00:00:00Z,-1\n", "sample_interval=5"), InputError);
  CHECK_THROWS_AS((void)read("timestamp,enmo\n2024-01-01T00:00:05Z,1\n2024-01-01T00:00:05Z,1\n", "sample_interval=5"),
                  InputError);
  CHECK_THROWS_AS((void)read("timestamp,enmo\n2024-01-01T00:00:00,1\n", "sample_interval=5"), InputError);
  CHECK_THROWS_AS((void)read("timestamp,enmo\n2024-01-01T00:00:00Z,1\n"), InputError);

  auto dst = read(
      "timestamp,enmo\n2024-03-31T01:59:55+01:00,1\n2024-03-31T03:00:00+02:00,1\n", "sample_interval=5\n");
  CHECK(dst.size() == 2);
  bool warned = false;
  for (const auto& w : dst.warnings()) warned |= w.find("UTC offset") != std::string::npos;
  CHECK(warned);
}

TEST_CASE("recording csv round trip") {
  std::vector<double> v{0.1, 0.2, 0.3, 0.4};
  Recording r("rt", Group::intervention(), parse_iso8601("2024-05-06T07:08:09+03:00"), 5.0, v, {{2, 3}});
  std::ostringstream csv, meta;
  write_recording_csv(csv, r);
  write_metadata(meta, r);
  auto back = read(csv.str(), meta.str());
  CHECK(back.subject_id() == "rt");
  CHECK(back.group() == Group::intervention());
  CHECK(back.start_time() == r.start_time());
  CHECK(back.gaps() == r.gaps());
  CHECK(back.enmo()[3] == doctest::Approx(0.4));
}

TEST_CASE("artifact writers") {
  IvSweep s{{1, 2}, {0.5, 0.75}, 5.0, {}};
  std::ostringstream out;
  write_sweep_csv(out, s);
  CHECK(out.str() == "delta,interval_seconds,iv\n1,5,0.5\n2,10,0.75\n");

  DfaFit fit;
  fit.scales = {16, 32};
  fit.fluctuations = {2.0, 4.0};
  std::ostringstream d;
  write_dfa_csv(d, fit);
  CHECK(d.str() == "log2_S,log2_F\n4,1\n5,2\n");

  SpectralEstimate est({0.0, 1.0, 2.0, 3.0}, 1.0, 6, 1, 1.0);
  std::ostringstream sp;
  write_spectrum_csv(sp, est, 0.1, 0.4);
  CHECK(sp.str().find("frequency_hz,power_density\n") == 0);
  // grid spacing 1/6 Hz: only 1/6 and 1/3 fall inside [0.1, 0.4]
  const std::string spectrum = sp.str();
  CHECK(spectrum.find("\n0,") == std::string::npos);
  CHECK(std::count(spectrum.begin(), spectrum.end(), '\n') == 3);

  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(std::nan("")) == "NA");
}

TEST_CASE("config defaults, parsing and hashing") {
  RunConfig c;
  CHECK(c.iv_delta == 60);
  CHECK(c.iv_sweep_max == 720);
  CHECK(c.dfa_config().scales().front() == 16);
  CHECK(c.schedule().night_start_hour == 23.0);
  CHECK(c.pov_k_max == 4);
  CHECK(c.band_lo_hz == 1.0 / 88200.0);
  CHECK_NOTHROW(c.validate());

  std::istringstream in("# run\ninputs=a\ninputs = b\niv_delta=30\nnight_start_hour=22.5\n");
  auto p = parse_config(in);
  CHECK(p.inputs == std::vector<std::string>{"a", "b"});
  CHECK(p.iv_delta == 30);
  CHECK(p.night_start_hour == 22.5);

  std::istringstream unknown("iv_detla=3\n");
  CHECK_THROWS_AS((void)parse_config(unknown), InvalidParameter);
  std::istringstream badnum("iv_delta=-3\n");
  CHECK_THROWS_AS((void)parse_config(badnum), InvalidParameter);

  // serialization round-trips
  std::istringstream again(serialize(p));
  auto q = parse_config(again);
  CHECK(serialize(q) == serialize(p));
  CHECK(config_hash(q) == config_hash(p));

  // the hash moves with every analysis field and ignores workers/output
  const std::string h0 = config_hash(c);
  for (const auto& key : setting_keys()) {
    RunConfig m;
    std::string value = "7";
    if (key == "inputs" || key == "output_dir") value = "elsewhere";
    if (key == "band_lo_hz") value = "1e-6";
    if (key == "band_hi_hz") value = "2e-5";
    apply_setting(m, key, value);
    if (key == "inputs" || key == "output_dir" || key == "workers") {
      CHECK(config_hash(m) == h0);
    } else {
      CHECK_MESSAGE(config_hash(m) != h0, key);
    }
  }

  RunConfig bad;
  bad.iv_sweep_min = 10;
  bad.iv_sweep_max = 5;
  CHECK_THROWS_AS(bad.validate(), InvalidParameter);
  bad = RunConfig{};
  bad.band_hi_hz = bad.band_lo_hz;
  CHECK_THROWS_AS(bad.validate(), InvalidParameter);
}

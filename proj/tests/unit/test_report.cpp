#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "ballheat/report.hpp"

using namespace ballheat;

TEST_SUITE("report") {

TEST_CASE("empty record set") {
  std::ostringstream out;
  write_records(out, {});
  CHECK(out.str() == std::string(kCsvHeader) + "\n");
}

TEST_CASE("round trip is bit exact") {
  std::vector<RatioRecord> recs;
  RatioRecord a;
  a.n = 3;
  a.t = 1.0 / 3.0;
  a.abs_x = 0.999;
  a.abs_y = 1e-3;
  a.angle = std::numbers::pi - 1e-3;
  a.kernel = 1.2345678901234567e-250;
  a.shape = 4.9406564584124654e-324;
  a.ratio = a.kernel / 3.0;
  a.source = KernelSource::spectral;
  recs.push_back(a);
  RatioRecord b = a;
  b.source = KernelSource::skipped;
  b.ratio = std::numeric_limits<double>::quiet_NaN();
  recs.push_back(b);
  RatioRecord c = a;
  c.n = 1;
  c.shape = 0.0;
  c.kernel = 1e-14;
  c.ratio = std::numeric_limits<double>::quiet_NaN();
  c.flagged = true;
  c.source = KernelSource::interval;
  recs.push_back(c);
  RatioRecord d = a;
  d.source = KernelSource::mc;
  d.ratio = 0.1 + 0.2;
  recs.push_back(d);

  std::stringstream io;
  write_records(io, recs);
  const auto back = parse_records(io);
  REQUIRE(back.size() == recs.size());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    CHECK(back[i].n == recs[i].n);
    CHECK(back[i].t == recs[i].t);
    CHECK(back[i].abs_x == recs[i].abs_x);
    CHECK(back[i].abs_y == recs[i].abs_y);
    CHECK(back[i].angle == recs[i].angle);
    CHECK(back[i].kernel == recs[i].kernel);
    CHECK(back[i].shape == recs[i].shape);
    if (std::isnan(recs[i].ratio)) {
      CHECK(std::isnan(back[i].ratio));
    } else {
      CHECK(back[i].ratio == recs[i].ratio);
    }
    CHECK(back[i].source == recs[i].source);
    CHECK(back[i].flagged == recs[i].flagged);
  }
}

TEST_CASE("summary footer") {
  std::vector<RatioRecord> recs(2);
  recs[0].t = 0.02;
  recs[0].kernel = recs[0].shape = 1.0;
  recs[0].ratio = 0.5;
  recs[1].t = 0.5;
  recs[1].kernel = recs[1].shape = 1.0;
  recs[1].ratio = 4.0;
  const auto rep = summarize(recs, "g");
  std::stringstream io;
  write_records(io, recs, &rep);
  std::string line, last;
  int summaries = 0;
  while (std::getline(io, line)) {
    if (line.rfind("#summary,", 0) == 0) ++summaries;
    last = line;
  }
  CHECK(summaries == 1);
  CHECK(last.rfind("#summary,empirical_C,4,", 0) == 0);
  CHECK(last == summary_line(rep));
  std::stringstream src;
  write_records(src, recs, &rep);
  CHECK(parse_records(src).size() == 2);
}

TEST_CASE("number formatting") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("I/O failure names the path") {
  try {
    emit_report("/nonexistent-dir/out.csv", {});
    FAIL("expected an exception");
  } catch (const std::exception& e) {
    CHECK(std::string(e.what()).find("/nonexistent-dir/out.csv") != std::string::npos);
  }
}

}

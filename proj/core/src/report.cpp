#include "ballheat/report.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "ballheat/errors.hpp"

namespace ballheat {

namespace {

double parse_double(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw input_error("malformed number in CSV: " + s);
  return v;
}

KernelSource parse_source(const std::string& s) {
  if (s == "spectral") return KernelSource::spectral;
  if (s == "interval") return KernelSource::interval;
  if (s == "mc") return KernelSource::mc;
  if (s == "skipped") return KernelSource::skipped;
  throw input_error("unknown kernel source in CSV: " + s);
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string summary_line(const SweepReport& r) {
  std::ostringstream s;
  s << "#summary,empirical_C," << format_double(r.empirical_C) << ",min_ratio," << format_double(r.min_ratio)
    << ",max_ratio," << format_double(r.max_ratio) << ",records," << r.records << ",skipped," << r.skipped
    << ",flagged," << r.flagged << ",mc_fraction," << format_double(r.mc_fraction);
  for (const auto& d : r.decades) {
    s << ",C[" << format_double(d.t_lo) << ":" << format_double(d.t_hi) << "]," << format_double(d.empirical_C);
  }
  return s.str();
}

void write_records(std::ostream& out, const std::vector<RatioRecord>& records, const SweepReport* report) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.n << ',' << format_double(r.t) << ',' << format_double(r.abs_x) << ',' << format_double(r.abs_y)
        << ',' << format_double(r.angle) << ',' << format_double(r.kernel) << ',' << format_double(r.shape)
        << ',' << format_double(r.ratio) << ',' << to_string(r.source) << (r.flagged ? "+flagged" : "") << '\n';
  }
  if (report) out << summary_line(*report) << '\n';
}

void emit_report(const std::string& path, const std::vector<RatioRecord>& records, const SweepReport* report) {
  std::ofstream out(path);
  if (!out) throw input_error("cannot open " + path + " for writing");
  write_records(out, records, report);
  out.flush();
  if (!out) throw input_error("write to " + path + " failed");
}

std::vector<RatioRecord> parse_records(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw input_error("CSV header missing or wrong");
  std::vector<RatioRecord> out;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 9) throw input_error("CSV row must have 9 fields: " + line);
    RatioRecord r;
    r.n = static_cast<int>(parse_double(f[0]));
    r.t = parse_double(f[1]);
    r.abs_x = parse_double(f[2]);
    r.abs_y = parse_double(f[3]);
    r.angle = parse_double(f[4]);
    r.kernel = parse_double(f[5]);
    r.shape = parse_double(f[6]);
    r.ratio = parse_double(f[7]);
    std::string src = f[8];
    const std::string suffix = "+flagged";
    if (src.size() > suffix.size() && src.compare(src.size() - suffix.size(), suffix.size(), suffix) == 0) {
      r.flagged = true;
      src.resize(src.size() - suffix.size());
    }
    r.source = parse_source(src);
    out.push_back(r);
  }
  return out;
}

}  // namespace ballheat

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ballheat/verify.hpp"

namespace ballheat {

inline constexpr const char* kCsvHeader = "n,t,abs_x,abs_y,angle,kernel,shape,ratio,source";

/// CSV with the header above, 17 significant digits, one row per record.
/// A non-null report adds one "#summary,..." footer line.
void write_records(std::ostream& out, const std::vector<RatioRecord>& records,
                   const SweepReport* report = nullptr);
void emit_report(const std::string& path, const std::vector<RatioRecord>& records,
                 const SweepReport* report = nullptr);

/// Inverse of write_records; the footer, if any, is ignored. Flags are
/// recovered from the "flagged" source suffix.
std::vector<RatioRecord> parse_records(std::istream& in);

std::string summary_line(const SweepReport& report);

/// %.17g
std::string format_double(double v);

}  // namespace ballheat

#pragma once

#include <filesystem>

#include "nsap/monitor.hpp"

namespace nsap {

/// JSON serialization of inequality reports (one structured document per
/// inequality id, re-checkable from its stored series alone).
std::string report_to_json(const InequalityReport& report);
InequalityReport report_from_json(const std::string& text);

void write_report(const std::filesystem::path& path, const InequalityReport& report);
InequalityReport read_report(const std::filesystem::path& path);

/// Stable file name for a report: ineq_<id>[_p<p>].json
std::string report_filename(const InequalityReport& report);

}  // namespace nsap

#pragma once

#include <filesystem>
#include <ostream>
#include <string>

#include "json.hpp"

#include "opharm/experiments.hpp"

namespace opharm {

enum class ReportFormat { csv, json };

ReportFormat parse_report_format(const std::string& text);

/// Header field_id,p,method_a,method_b,norm_a,norm_b,ratio; numbers as %.17g.
void write_csv(const EquivalenceReport& report, std::ostream& out);

nlohmann::json report_to_json(const EquivalenceReport& report);
EquivalenceReport report_from_json(const nlohmann::json& j);

/// 32-bin histogram of log(ratio) per (p, method_a, method_b).
nlohmann::json ratio_histogram(const EquivalenceReport& report, int bins = 32);

/// Writes the report to `path` and the histogram next to it as <stem>_hist.json.
/// Throws IoError naming the path.
void emit_report(const EquivalenceReport& report, ReportFormat format, const std::filesystem::path& path);

}  // namespace opharm

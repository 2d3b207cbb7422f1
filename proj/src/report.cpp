#include "opharm/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "opharm/error.hpp"

namespace opharm {

namespace {

// JSON has no infinities; they travel as strings.
nlohmann::json number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return v;
}

double number_from(const nlohmann::json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw IoError("unexpected string '" + s + "' in numeric field");
  }
  return j.get<double>();
}

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace

ReportFormat parse_report_format(const std::string& text) {
  if (text == "csv") return ReportFormat::csv;
  if (text == "json") return ReportFormat::json;
  throw ConfigError("unknown report format '" + text + "'");
}

void write_csv(const EquivalenceReport& report, std::ostream& out) {
  out << "field_id,p,method_a,method_b,norm_a,norm_b,ratio\n";
  for (const auto& r : report.rows)
    out << r.field_id << ',' << g17(r.p) << ',' << r.method_a << ',' << r.method_b << ',' << g17(r.norm_a) << ','
        << g17(r.norm_b) << ',' << g17(r.ratio) << '\n';
}

nlohmann::json report_to_json(const EquivalenceReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows)
    rows.push_back({{"field_id", r.field_id},
                    {"p", number(r.p)},
                    {"method_a", r.method_a},
                    {"method_b", r.method_b},
                    {"norm_a", number(r.norm_a)},
                    {"norm_b", number(r.norm_b)},
                    {"ratio", number(r.ratio)}});
  nlohmann::json summary = nlohmann::json::array();
  for (const auto& s : report.summary)
    summary.push_back({{"p", number(s.p)},
                       {"method_a", s.method_a},
                       {"method_b", s.method_b},
                       {"count", s.count},
                       {"min", number(s.min)},
                       {"max", number(s.max)},
                       {"geo_mean", number(s.geo_mean)}});
  return {{"kind", report.kind}, {"rows", rows}, {"summary", summary}, {"violations", report.violations}};
}

EquivalenceReport report_from_json(const nlohmann::json& j) {
  try {
    EquivalenceReport report;
    report.kind = j.at("kind").get<std::string>();
    for (const auto& r : j.at("rows"))
      report.rows.push_back({r.at("field_id").get<int>(), number_from(r.at("p")), r.at("method_a").get<std::string>(),
                             r.at("method_b").get<std::string>(), number_from(r.at("norm_a")),
                             number_from(r.at("norm_b")), number_from(r.at("ratio"))});
    for (const auto& s : j.at("summary"))
      report.summary.push_back({number_from(s.at("p")), s.at("method_a").get<std::string>(),
                                s.at("method_b").get<std::string>(), s.at("count").get<std::size_t>(),
                                number_from(s.at("min")), number_from(s.at("max")), number_from(s.at("geo_mean"))});
    if (j.contains("violations")) report.violations = j.at("violations").get<std::vector<std::string>>();
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw IoError(std::string("malformed report: ") + e.what());
  }
}

nlohmann::json ratio_histogram(const EquivalenceReport& report, int bins) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& s : report.summary) {
    std::vector<double> logs;
    for (const auto& r : report.rows)
      if (r.p == s.p && r.method_a == s.method_a && r.method_b == s.method_b && r.ratio > 0.0 && std::isfinite(r.ratio))
        logs.push_back(std::log(r.ratio));
    double lo = 0.0, hi = 0.0;
    if (!logs.empty()) {
      lo = *std::min_element(logs.begin(), logs.end());
      hi = *std::max_element(logs.begin(), logs.end());
    }
    if (hi - lo < 1e-12) {
      lo -= 0.5e-6;
      hi += 0.5e-6;
    }
    std::vector<int> counts(static_cast<std::size_t>(bins), 0);
    for (const double v : logs) {
      const int b = std::min(bins - 1, static_cast<int>((v - lo) / (hi - lo) * bins));
      ++counts[static_cast<std::size_t>(b)];
    }
    out.push_back({{"p", number(s.p)},
                   {"method_a", s.method_a},
                   {"method_b", s.method_b},
                   {"log_ratio_min", lo},
                   {"log_ratio_max", hi},
                   {"counts", counts}});
  }
  return out;
}

void emit_report(const EquivalenceReport& report, ReportFormat format, const std::filesystem::path& path) {
  if (format == ReportFormat::csv) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    write_csv(report, out);
    if (!out) throw IoError("write failed for " + path.string());
  } else {
    write_text(path, report_to_json(report).dump(2) + "\n");
  }
  std::filesystem::path hist = path;
  hist.replace_filename(path.stem().string() + "_hist.json");
  write_text(hist, ratio_histogram(report).dump(2) + "\n");
}

}  // namespace opharm

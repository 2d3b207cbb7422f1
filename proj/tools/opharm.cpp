#include <omp.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"

#include "opharm/check_suite.hpp"
#include "opharm/companion.hpp"
#include "opharm/error.hpp"
#include "opharm/experiments.hpp"
#include "opharm/report.hpp"

namespace {

constexpr int kExitViolation = 1;
constexpr int kExitConfig = 2;

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw opharm::ConfigError("cannot read config " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw opharm::ConfigError("config " + path + " is not valid JSON: " + e.what());
  }
}

int cmd_run(const std::string& kind, const std::string& config, const std::string& out_dir, const std::string& format,
            const std::optional<std::uint64_t>& seed) {
  nlohmann::json j = config.empty() ? nlohmann::json::object() : read_json(config);
  if (!kind.empty()) j["kind"] = kind;
  if (seed) j["seed"] = *seed;
  const opharm::ExperimentConfig cfg = opharm::config_from_json(j);
  const auto fmt = opharm::parse_report_format(format);
  std::filesystem::create_directories(out_dir);
  const opharm::EquivalenceReport report = opharm::run_experiment(cfg);
  const auto path = std::filesystem::path(out_dir) / (cfg.kind + (fmt == opharm::ReportFormat::csv ? ".csv" : ".json"));
  opharm::emit_report(report, fmt, path);
  for (const auto& s : report.summary)
    std::printf("p=%-4g %-28s / %-22s n=%-3zu min %.6g  max %.6g  geo %.6g\n", s.p, s.method_a.c_str(),
                s.method_b.c_str(), s.count, s.min, s.max, s.geo_mean);
  std::printf("wrote %s\n", path.string().c_str());
  for (const auto& v : report.violations) std::fprintf(stderr, "violation: %s\n", v.c_str());
  return report.violations.empty() ? 0 : kExitViolation;
}

int cmd_check(const std::vector<int>& only, const std::string& json_out) {
  std::vector<opharm::CheckResult> results;
  if (only.empty()) {
    for (int id = 1; id <= opharm::kNumChecks; ++id) {
      results.push_back(opharm::run_check(id));
      const auto& r = results.back();
      std::printf("[%s] %d %s (%.1fs): %s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds,
                  r.detail.c_str());
      std::fflush(stdout);
    }
  } else {
    for (const int id : only) {
      results.push_back(opharm::run_check(id));
      const auto& r = results.back();
      std::printf("[%s] %d %s (%.1fs): %s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.seconds,
                  r.detail.c_str());
    }
  }
  bool pass = true;
  nlohmann::json j = nlohmann::json::array();
  for (const auto& r : results) {
    pass &= r.pass;
    j.push_back(opharm::to_json(r));
  }
  if (!json_out.empty()) {
    std::ofstream out(json_out);
    if (!out) throw opharm::IoError("cannot write " + json_out);
    out << j.dump(2) << "\n";
  }
  return pass ? 0 : kExitViolation;
}

int cmd_companion(const std::string& phi, const std::string& mode, const std::string& out) {
  const auto pair = opharm::build_companion(opharm::parse_symbol(phi), opharm::parse_pair_mode(mode));
  const std::string text = opharm::pair_to_json(pair).dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out);
    if (!f) throw opharm::IoError("cannot write " + out);
    f << text;
  }
  return pair.valid ? 0 : kExitViolation;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Operator-valued harmonic analysis on the torus"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "OpenMP threads (0 keeps the default)");

  auto* run = app.add_subcommand("run", "Run an equivalence experiment and write a report");
  std::string kind, config, out_dir = "out", format = "csv";
  std::optional<std::uint64_t> seed;
  run->add_option("--kind", kind, "hardy_equiv, hardy_equiv_discrete, carleson, bmo_poisson, radial_conic, qt_hardy");
  run->add_option("--config", config, "JSON file with ExperimentConfig fields");
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_option("--format", format, "csv or json");
  run->add_option("--seed", seed, "Overrides the config seed");
  run->add_option("--threads", threads, "OpenMP threads");

  auto* check = app.add_subcommand("check", "Run the invariant suite");
  std::vector<int> only;
  std::string json_out;
  check->add_option("--only", only, "Run only these check numbers");
  check->add_option("--json", json_out, "Also write results as JSON");
  check->add_option("--threads", threads, "OpenMP threads");

  auto* companion = app.add_subcommand("companion", "Emit the companion pair of a symbol as JSON");
  std::string phi, mode = "continuous", comp_out;
  companion->add_option("--phi", phi, "Symbol, e.g. gauss_lp or riesz_poisson(1.5)")->required();
  companion->add_option("--mode", mode, "continuous or discrete");
  companion->add_option("--out", comp_out, "Write to a file instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitConfig;
  }
  if (threads > 0) omp_set_num_threads(threads);

  try {
    if (*run) return cmd_run(kind, config, out_dir, format, seed);
    if (*check) return cmd_check(only, json_out);
    if (*companion) return cmd_companion(phi, mode, comp_out);
  } catch (const opharm::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  }
  return 0;
}

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "opharm/corpus.hpp"

namespace opharm {

/// hardy_equiv, hardy_equiv_discrete, carleson, bmo_poisson, radial_conic, qt_hardy.
struct ExperimentConfig {
  std::string kind = "hardy_equiv";
  std::uint64_t seed = 1;
  int d = 1;
  int N = 32;
  int n = 2;
  int bandM = 6;
  std::vector<double> p_list{1.0, 2.0, 4.0};
  std::string phi = "gauss_lp";
  std::string phi_discrete = "annulus_bump";
  double alpha = 1.0;
  double eps_min = 0.0;  // 0 selects 1e-3 / N
  double eps_max = 1.0;
  int K = 128;
  std::vector<std::string> theta{"0", "1/3", "1/5"};
  int corpus_size = 50;
  bool zero_mean = true;
  bool hermitian = false;
  double scale = 1.0;
  bool adjoint = false;
  std::string shifts = "none";
  /// Method pairs (a, b); empty selects the defaults of the kind.
  std::vector<std::pair<std::string, std::string>> methods;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);
/// Throws ConfigError.
void validate(const ExperimentConfig& cfg);
CorpusSpec corpus_spec(const ExperimentConfig& cfg);
std::vector<std::string> experiment_kinds();
std::vector<std::pair<std::string, std::string>> default_methods(const std::string& kind);

struct EquivalenceRow {
  int field_id = 0;
  double p = 2.0;
  std::string method_a;
  std::string method_b;
  double norm_a = 0.0;
  double norm_b = 0.0;
  double ratio = 1.0;  // norm_a / norm_b; 1 when both vanish
};

struct SummaryRow {
  double p = 2.0;
  std::string method_a;
  std::string method_b;
  std::size_t count = 0;
  double min = 0.0;
  double max = 0.0;
  double geo_mean = 0.0;
};

struct EquivalenceReport {
  std::string kind;
  std::vector<EquivalenceRow> rows;
  std::vector<SummaryRow> summary;
  /// Invariant violations found while running (empty on success).
  std::vector<std::string> violations;
};

/// Groups rows by (p, method_a, method_b) in first-appearance order.
std::vector<SummaryRow> summarize(const std::vector<EquivalenceRow>& rows);

EquivalenceReport run_experiment(const ExperimentConfig& cfg);

}  // namespace opharm

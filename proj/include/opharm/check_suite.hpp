#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace opharm {

struct CheckResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;  // measured quantities
  double seconds = 0.0;
};

/// Number of checks run by run_check_suite (1..kNumChecks).
inline constexpr int kNumChecks = 9;

/// One invariant check by number:
///  1 FFT roundtrip and Plancherel pairing over the test matrix
///  2 reproducing residuals of the companion pairs
///  3 Poisson p = 2 identity ||s(f)||_2 = ||f||_2 / 2
///  4 single-mode cone factorization
///  5 Poisson derivative identity, k = 1, 2
///  6 decay of the Riesz-Poisson kernels
///  7 Carleson / BMO^2 band and its seed stability
///  8 Hardy equivalence bands: seed stability and scaling invariance
///  9 quantum torus oracles and bands
/// Exceptions are reported as failures.
CheckResult run_check(int id);

std::vector<CheckResult> run_check_suite();

nlohmann::json to_json(const CheckResult& r);

}  // namespace opharm

#pragma once

#include <span>
#include <vector>

#include "json.hpp"

#include "opharm/grid.hpp"
#include "opharm/symbols.hpp"

namespace opharm {

enum class PairMode { continuous, discrete };

const char* to_string(PairMode mode);
PairMode parse_pair_mode(const std::string& text);

/// Calderon pair (phi, psi). psi is evaluated exactly; the geometric table
/// (4096 nodes on [1e-4, 1e4], monotone cubic interpolation) is kept for export
/// and for callers that only have the table.
struct MultiplierPair {
  RadialSymbol phi;
  PairMode mode = PairMode::continuous;
  /// Continuous mode: integral of phi(u)^2 eta(u) du/u, the normalizer of psi.
  double normalizer = 1.0;
  double residual = 1.0;
  bool valid = false;
  std::vector<double> xi_grid;
  std::vector<double> psi_values;

  double psi(double r) const;
  double psi_tabulated(double r) const;
};

/// Continuous: psi = phi eta / h with h constant for radial phi. Discrete:
/// psi(r) = phi(r) / sum_j phi(2^j r)^2. The residual is measured on the lattice
/// radii 1 <= |m| <= N/2 of `residual_grid` (with its companion-default scale
/// grid in continuous mode).
MultiplierPair build_companion(const RadialSymbol& phi, PairMode mode, const GridSpec& residual_grid = GridSpec(2, 64));

/// continuous: max_r |sum_k w_k phi(eps_k r) psi(eps_k r) - 1|;
/// discrete: max_r |sum_{j in Z} phi(2^j r) psi(2^j r) - 1| (sgrid unused).
double reproducing_residual(const MultiplierPair& pair, std::span<const double> radii, const ScaleGrid& sgrid);

/// sum over j in Z of phi(2^j r)^2, truncated where terms fall below 1e-16.
double dyadic_energy(const RadialSymbol& phi, double r);

nlohmann::json pair_to_json(const MultiplierPair& pair);

}  // namespace opharm

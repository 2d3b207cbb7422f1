#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "opharm/grid.hpp"

namespace opharm {

enum class SymbolKind { poisson, d_poisson, riesz_poisson, gauss_lp, annulus_bump };

/// Radial Fourier symbol phi(|xi|) of a test function.
struct RadialSymbol {
  SymbolKind kind = SymbolKind::d_poisson;
  double alpha = 1.0;      // order, riesz_poisson only
  double amplitude = 1.0;  // overall factor; 0 gives the zero symbol

  static RadialSymbol poisson() { return {SymbolKind::poisson}; }
  static RadialSymbol d_poisson() { return {SymbolKind::d_poisson}; }
  static RadialSymbol riesz_poisson(double alpha);
  static RadialSymbol gauss_lp() { return {SymbolKind::gauss_lp}; }
  static RadialSymbol annulus_bump() { return {SymbolKind::annulus_bump}; }

  /// "d_poisson", "riesz_poisson(1.5)", ...
  std::string name() const;
  nlohmann::json params() const;
  /// True unless the symbol is nonzero at the origin.
  bool vanishing_mean() const { return kind != SymbolKind::poisson || amplitude == 0.0; }
};

/// Accepts the forms produced by RadialSymbol::name(); throws ConfigError.
RadialSymbol parse_symbol(const std::string& text);

double eval_symbol(const RadialSymbol& sym, double r);

/// exp(1 - 1/(1 - u^2)), u = (r - 5/4)/(3/4): smooth, supported in [1/2, 2],
/// equal to 1 at r = 5/4.
double annulus_bump_value(double r);

/// Quadrature nodes for the scale measure d(eps)/eps.
struct ScaleGrid {
  std::vector<double> nodes;    // strictly increasing
  std::vector<double> weights;  // weights for d(eps)/eps
  double eps_min = 0.0;
  double eps_max = 0.0;
  bool dyadic = false;

  /// K log-spaced nodes, trapezoid in log(eps): sum of weights = log(eps_max/eps_min).
  static ScaleGrid log_spaced(double eps_min, double eps_max, int K);
  /// Nodes 2^-j for j = jmax..0 (ascending), unit weights.
  static ScaleGrid dyadic_levels(int jmax);
  /// Dyadic levels down to 1/(2N).
  static ScaleGrid dyadic_for(const GridSpec& grid);
  /// eps in [1/(4N), 8], K = 512: the grid used to validate companion pairs.
  static ScaleGrid companion_default(const GridSpec& grid);
  /// eps in [1e-3/N, 1], K = 128: torus square functions.
  static ScaleGrid torus_default(const GridSpec& grid, int K = 128);

  std::size_t size() const { return nodes.size(); }
  /// Level j of a dyadic node.
  int level(std::size_t k) const;
  /// Trapezoid weights of the same nodes restricted to [nodes[first], nodes[last]].
  std::vector<double> restricted_weights(std::size_t first, std::size_t last) const;
};

enum class NondegMode { continuous, discrete, torus };

struct NondegeneracyReport {
  NondegMode mode = NondegMode::continuous;
  bool pass = false;
  std::size_t tested = 0;
  std::vector<double> failing;    // radii without a witness
  std::vector<double> witnesses;  // per tested radius: eps, or the window start a; NaN if none
};

/// Searches, for every tested radius r, a scale (continuous, torus) or a
/// window (a, 2a] (discrete) on which |phi(eps r)| > tol. A pass is only a
/// statement about the tested radii.
NondegeneracyReport check_nondegenerate(const RadialSymbol& sym, NondegMode mode, std::span<const double> radii,
                                        double tol = 1e-8);

/// Distinct values of |m| over lattice frequencies with 1 <= |m| <= N/2 in dimension d.
std::vector<double> lattice_radii(const GridSpec& grid);

const char* to_string(NondegMode mode);

}  // namespace opharm

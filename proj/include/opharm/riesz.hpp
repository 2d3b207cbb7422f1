#pragma once

#include <span>
#include <vector>

#include "json.hpp"

#include "opharm/symbols.hpp"

namespace opharm {

/// Inverse Fourier transform of |xi|^alpha e^{-2 pi |xi|} at a point of norm
/// `radius` in R^d, d = 1 or 2. Closed forms: 2 Gamma(alpha+1) Re (2 pi (1 - i s))^{-alpha-1}
/// for d = 1 and 2 pi Gamma(mu) rho^-mu P_{mu-1}(2 pi / rho), mu = alpha + 2,
/// rho = 2 pi sqrt(1 + s^2), for d = 2.
double riesz_poisson_spatial(double alpha, double radius, int d);

/// Same value by panelled Gauss-Kronrod quadrature of the radial integral.
/// Throws AccuracyError when the error estimate exceeds the budget, which
/// happens for large radii where the value is far below the integrand mass,
/// and for orders below 1 where the integrand is not smooth at the origin.
double riesz_poisson_spatial_quadrature(double alpha, double radius, int d);

struct DecayReport {
  double alpha = 0.0;
  double sigma = 0.0;
  int d = 1;
  std::vector<double> radii;
  std::vector<double> values;  // (1 + r^2)^{(d+sigma)/2} |I^alpha(P)| at |s| = r
  double max_value = 0.0;
  double tail_slope = 0.0;  // least-squares slope of log g vs log r over the last decade
  bool bounded = false;
};

DecayReport bessel_decay_report(double alpha, double sigma, std::span<const double> radii, int d);

/// Largest ratio |Phi_eps(s)| / min(eps^-d, eps^sigma / |s|^{d+sigma}) for
/// Phi = I^alpha(P) over the sampled scales and radii.
struct KernelBoundReport {
  double constant = 0.0;
  double worst_eps = 0.0;
  double worst_radius = 0.0;
};

KernelBoundReport kernel_decay_report(double alpha, double sigma, int d, std::span<const double> eps_list,
                                      std::span<const double> radii);

/// sup over tested radii of (sum_k w_k phi(eps_k r)^2)^{1/2}.
double multiplier_bound(const RadialSymbol& sym, const ScaleGrid& sgrid, std::span<const double> radii);

nlohmann::json to_json(const DecayReport& rep);

}  // namespace opharm

#include "opharm/hardy.hpp"

#include <cmath>
#include <numbers>

#include "opharm/error.hpp"

namespace opharm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct MethodName {
  HardyMethod method;
  const char* name;
};

constexpr MethodName kNames[] = {
    {HardyMethod::poisson_radial, "poisson_radial"},
    {HardyMethod::poisson_radial_circular, "poisson_radial_circular"},
    {HardyMethod::poisson_conic, "poisson_conic"},
    {HardyMethod::phi_radial, "phi_radial"},
    {HardyMethod::phi_conic, "phi_conic"},
    {HardyMethod::phi_radial_discrete, "phi_radial_discrete"},
    {HardyMethod::phi_conic_discrete, "phi_conic_discrete"},
    {HardyMethod::riesz_poisson_k, "riesz_poisson_k"},
};

// d/dr P_r on the Fourier side: |m| r^{|m|-1}, r = e^{-2 pi eps}.
ScaleMultiplier radial_derivative_poisson() {
  return [](double eps, const LatticeVec& m) {
    const double a = euclidean_norm(m);
    if (a == 0.0) return cd{0.0, 0.0};
    return cd{a * std::exp(-kTwoPi * eps * (a - 1.0)), 0.0};
  };
}

}  // namespace

const char* to_string(HardyMethod method) {
  for (const auto& e : kNames)
    if (e.method == method) return e.name;
  return "?";
}

HardyMethod parse_hardy_method(const std::string& text) {
  for (const auto& e : kNames)
    if (text == e.name) return e.method;
  throw ConfigError("unknown Hardy method '" + text + "'");
}

std::vector<HardyMethod> all_hardy_methods() {
  std::vector<HardyMethod> out;
  for (const auto& e : kNames) out.push_back(e.method);
  return out;
}

std::vector<cd> hardy_squares(const OperatorField& f, HardyMethod method, const HardyConfig& cfg) {
  const ScaleGrid grid = cfg.grid ? *cfg.grid : ScaleGrid::torus_default(f.grid());
  switch (method) {
    case HardyMethod::poisson_radial:
    case HardyMethod::poisson_radial_circular: {
      ScaleGrid g = grid;
      if (method == HardyMethod::poisson_radial_circular && !cfg.grid)
        g = ScaleGrid::log_spaced(1e-3 / f.grid().N, 8.0, 160);
      // transport (2 pi)^2 r^2 eps^2 d(eps)/eps, resp. (1 - r) dr, onto the eps nodes
      for (std::size_t k = 0; k < g.size(); ++k) {
        const double eps = g.nodes[k];
        const double r = std::exp(-kTwoPi * eps);
        g.weights[k] *= method == HardyMethod::poisson_radial ? kTwoPi * kTwoPi * r * r * eps * eps
                                                              : kTwoPi * eps * r * (1.0 - r);
      }
      return square_fn_squares(f, radial_derivative_poisson(), g, SquareKind::radial);
    }
    case HardyMethod::poisson_conic:
      return square_fn_squares(f, radial_multiplier(RadialSymbol::d_poisson()), grid, SquareKind::conic, cfg.cone);
    case HardyMethod::phi_radial:
      return square_fn_squares(f, radial_multiplier(cfg.phi), grid, SquareKind::radial);
    case HardyMethod::phi_conic:
      return square_fn_squares(f, radial_multiplier(cfg.phi), grid, SquareKind::conic, cfg.cone);
    case HardyMethod::phi_radial_discrete:
      return square_fn_squares(f, radial_multiplier(cfg.phi_discrete), ScaleGrid::dyadic_for(f.grid()),
                               SquareKind::radial_discrete);
    case HardyMethod::phi_conic_discrete:
      return square_fn_squares(f, radial_multiplier(cfg.phi_discrete), ScaleGrid::dyadic_for(f.grid()),
                               SquareKind::conic_discrete, cfg.cone);
    case HardyMethod::riesz_poisson_k:
      return square_fn_squares(f, radial_multiplier(RadialSymbol::riesz_poisson(cfg.alpha)), grid,
                               SquareKind::radial);
  }
  throw ConfigError("unknown Hardy method");
}

OperatorField hardy_square_function(const OperatorField& f, HardyMethod method, const HardyConfig& cfg) {
  return kernels::psd_sqrt_field(f.grid(), f.n(), hardy_squares(f, method, cfg));
}

double hardy_norm(const OperatorField& f, double p, HardyMethod method, const HardyConfig& cfg) {
  if (!(p >= 1.0)) throw_domain("hardy_norm needs p >= 1");
  return schatten_norm(field_mean(f), p) + lp_field_norm(hardy_square_function(f, method, cfg), p);
}

double hardy_norm_row(const OperatorField& f, double p, HardyMethod method, const HardyConfig& cfg) {
  return hardy_norm(adjoint(f), p, method, cfg);
}

}  // namespace opharm

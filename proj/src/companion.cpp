#include "opharm/companion.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

// Boost 1.74 pchip calls isnan unqualified.
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "opharm/error.hpp"

namespace opharm {

namespace {

constexpr int kTableNodes = 4096;
constexpr double kTableLo = 1e-4;
constexpr double kTableHi = 1e4;
constexpr double kTermFloor = 1e-16;

double continuous_normalizer(const RadialSymbol& phi) {
  auto integrand = [&](double u) {
    const double v = eval_symbol(phi, u);
    return v * v * annulus_bump_value(u) / u;
  };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.5, 2.0, 15, 1e-14);
}

}  // namespace

const char* to_string(PairMode mode) { return mode == PairMode::continuous ? "continuous" : "discrete"; }

PairMode parse_pair_mode(const std::string& text) {
  if (text == "continuous") return PairMode::continuous;
  if (text == "discrete") return PairMode::discrete;
  throw ConfigError("unknown pair mode '" + text + "'");
}

double dyadic_energy(const RadialSymbol& phi, double r) {
  if (!(r > 0.0)) return 0.0;
  double total = 0.0;
  for (int dir : {+1, -1}) {
    for (int j = dir > 0 ? 0 : -1; std::abs(j) <= 1100; j += dir) {
      const double x = std::ldexp(r, j);
      if (x == 0.0 || std::isinf(x)) break;
      const double v = eval_symbol(phi, x);
      const double term = v * v;
      total += term;
      const bool past = dir > 0 ? x > 2.0 : x < 0.5;
      if (past && term < kTermFloor) break;
    }
  }
  return total;
}

double MultiplierPair::psi(double r) const {
  if (!(r > 0.0)) return 0.0;
  const double v = eval_symbol(phi, r);
  if (v == 0.0) return 0.0;
  if (mode == PairMode::continuous) return v * annulus_bump_value(r) / normalizer;
  return v / dyadic_energy(phi, r);
}

double MultiplierPair::psi_tabulated(double r) const {
  if (xi_grid.empty()) throw_domain("pair has no psi table");
  if (r <= xi_grid.front() || r >= xi_grid.back()) return 0.0;
  const auto it = std::upper_bound(xi_grid.begin(), xi_grid.end(), r);
  const std::size_t i1 = static_cast<std::size_t>(it - xi_grid.begin());
  const std::size_t lo = std::min(i1 >= 2 ? i1 - 2 : 0, xi_grid.size() - 4);
  const std::size_t hi = lo + 4;
  // local four-point pchip in log(r)
  std::vector<double> x, y;
  for (std::size_t i = lo; i < hi; ++i) {
    x.push_back(std::log(xi_grid[i]));
    y.push_back(psi_values[i]);
  }
  boost::math::interpolators::pchip<std::vector<double>> spline(std::move(x), std::move(y));
  return spline(std::log(r));
}

MultiplierPair build_companion(const RadialSymbol& phi, PairMode mode, const GridSpec& residual_grid) {
  if (!phi.vanishing_mean()) throw_domain("companion needs a symbol of vanishing mean");
  const std::vector<double> radii = lattice_radii(residual_grid);
  const NondegMode nmode = mode == PairMode::continuous ? NondegMode::continuous : NondegMode::discrete;
  if (!check_nondegenerate(phi, nmode, radii).pass) throw DegeneracyError("symbol " + phi.name() + " is degenerate");

  MultiplierPair pair;
  pair.phi = phi;
  pair.mode = mode;
  if (mode == PairMode::continuous) {
    pair.normalizer = continuous_normalizer(phi);
    if (pair.normalizer < 1e-12) throw ConditioningError("companion normalizer below 1e-12 on the bump support");
  } else {
    for (int i = 0; i < 64; ++i) {
      const double r = std::exp2(i / 64.0);
      if (dyadic_energy(phi, r) < 1e-12) throw ConditioningError("dyadic energy below 1e-12");
    }
  }

  pair.xi_grid.resize(kTableNodes);
  pair.psi_values.resize(kTableNodes);
  const double step = std::log(kTableHi / kTableLo) / (kTableNodes - 1);
  for (int i = 0; i < kTableNodes; ++i) {
    pair.xi_grid[static_cast<std::size_t>(i)] = kTableLo * std::exp(step * i);
    pair.psi_values[static_cast<std::size_t>(i)] = pair.psi(pair.xi_grid[static_cast<std::size_t>(i)]);
  }

  pair.residual = reproducing_residual(pair, radii, ScaleGrid::companion_default(residual_grid));
  pair.valid = pair.residual <= (mode == PairMode::continuous ? 1e-6 : 1e-10);
  return pair;
}

double reproducing_residual(const MultiplierPair& pair, std::span<const double> radii, const ScaleGrid& sgrid) {
  double worst = 0.0;
  for (const double r : radii) {
    if (!(r > 0.0)) throw_domain("reproducing_residual: lattice must exclude 0");
    double sum = 0.0;
    if (pair.mode == PairMode::continuous) {
      for (std::size_t k = 0; k < sgrid.size(); ++k) {
        const double x = sgrid.nodes[k] * r;
        sum += sgrid.weights[k] * eval_symbol(pair.phi, x) * pair.psi(x);
      }
    } else {
      for (int dir : {+1, -1}) {
        for (int j = dir > 0 ? 0 : -1; std::abs(j) <= 1100; j += dir) {
          const double x = std::ldexp(r, j);
          if (x == 0.0 || std::isinf(x)) break;
          const double term = eval_symbol(pair.phi, x) * pair.psi(x);
          sum += term;
          const bool past = dir > 0 ? x > 2.0 : x < 0.5;
          if (past && std::abs(term) < kTermFloor) break;
        }
      }
    }
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return worst;
}

nlohmann::json pair_to_json(const MultiplierPair& pair) {
  return {{"phi_kind", pair.phi.name()},
          {"params", pair.phi.params()},
          {"mode", to_string(pair.mode)},
          {"xi_grid", pair.xi_grid},
          {"psi_values", pair.psi_values},
          {"residual", pair.residual}};
}

}  // namespace opharm

#include "opharm/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <regex>
#include <set>

#include "opharm/error.hpp"

namespace opharm {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

RadialSymbol RadialSymbol::riesz_poisson(double alpha) {
  if (!(alpha > 0.0)) throw_domain("riesz_poisson needs alpha > 0");
  return {SymbolKind::riesz_poisson, alpha};
}

std::string RadialSymbol::name() const {
  switch (kind) {
    case SymbolKind::poisson: return "poisson";
    case SymbolKind::d_poisson: return "d_poisson";
    case SymbolKind::riesz_poisson: {
      char buf[64];
      std::snprintf(buf, sizeof buf, "riesz_poisson(%g)", alpha);
      return buf;
    }
    case SymbolKind::gauss_lp: return "gauss_lp";
    case SymbolKind::annulus_bump: return "annulus_bump";
  }
  return "unknown";
}

nlohmann::json RadialSymbol::params() const {
  nlohmann::json j = {{"amplitude", amplitude}};
  if (kind == SymbolKind::riesz_poisson) j["alpha"] = alpha;
  return j;
}

RadialSymbol parse_symbol(const std::string& text) {
  static const std::regex riesz(R"(riesz_poisson\(([0-9.eE+-]+)\))");
  std::smatch match;
  if (text == "poisson") return RadialSymbol::poisson();
  if (text == "d_poisson") return RadialSymbol::d_poisson();
  if (text == "gauss_lp") return RadialSymbol::gauss_lp();
  if (text == "annulus_bump") return RadialSymbol::annulus_bump();
  if (std::regex_match(text, match, riesz)) {
    try {
      return RadialSymbol::riesz_poisson(std::stod(match[1].str()));
    } catch (const std::exception&) {
    }
  }
  throw ConfigError("unknown symbol '" + text + "'");
}

double annulus_bump_value(double r) {
  const double u = (r - 1.25) / 0.75;
  if (std::abs(u) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - u * u));
}

double eval_symbol(const RadialSymbol& sym, double r) {
  if (r < 0.0) throw_domain("eval_symbol needs r >= 0");
  double v = 0.0;
  switch (sym.kind) {
    case SymbolKind::poisson: v = std::exp(-kTwoPi * r); break;
    case SymbolKind::d_poisson: v = kTwoPi * r * std::exp(-kTwoPi * r); break;
    case SymbolKind::riesz_poisson: v = r == 0.0 ? 0.0 : std::pow(r, sym.alpha) * std::exp(-kTwoPi * r); break;
    case SymbolKind::gauss_lp: v = r * r * std::exp(-r * r); break;
    case SymbolKind::annulus_bump: v = annulus_bump_value(r); break;
  }
  return sym.amplitude * v;
}

ScaleGrid ScaleGrid::log_spaced(double eps_min, double eps_max, int K) {
  if (!(eps_min > 0.0) || !(eps_max > eps_min)) throw_domain("scale grid needs 0 < eps_min < eps_max");
  if (K < 2) throw_domain("scale grid needs at least two nodes");
  ScaleGrid g;
  g.eps_min = eps_min;
  g.eps_max = eps_max;
  const double span = std::log(eps_max / eps_min);
  const double step = span / (K - 1);
  g.nodes.resize(static_cast<std::size_t>(K));
  g.weights.assign(static_cast<std::size_t>(K), step);
  for (int k = 0; k < K; ++k) g.nodes[static_cast<std::size_t>(k)] = eps_min * std::exp(step * k);
  g.nodes.front() = eps_min;
  g.nodes.back() = eps_max;
  g.weights.front() = g.weights.back() = 0.5 * step;
  return g;
}

ScaleGrid ScaleGrid::dyadic_levels(int jmax) {
  if (jmax < 0) throw_domain("dyadic grid needs jmax >= 0");
  ScaleGrid g;
  g.dyadic = true;
  for (int j = jmax; j >= 0; --j) g.nodes.push_back(std::ldexp(1.0, -j));
  g.weights.assign(g.nodes.size(), 1.0);
  g.eps_min = g.nodes.front();
  g.eps_max = g.nodes.back();
  return g;
}

ScaleGrid ScaleGrid::dyadic_for(const GridSpec& grid) {
  int jmax = 0;
  while ((1 << jmax) < 2 * grid.N) ++jmax;
  return dyadic_levels(jmax);
}

ScaleGrid ScaleGrid::companion_default(const GridSpec& grid) { return log_spaced(0.25 / grid.N, 8.0, 512); }

ScaleGrid ScaleGrid::torus_default(const GridSpec& grid, int K) { return log_spaced(1e-3 / grid.N, 1.0, K); }

int ScaleGrid::level(std::size_t k) const {
  if (!dyadic) throw_domain("level() on a non-dyadic grid");
  return static_cast<int>(std::lround(-std::log2(nodes.at(k))));
}

std::vector<double> ScaleGrid::restricted_weights(std::size_t first, std::size_t last) const {
  std::vector<double> w(size(), 0.0);
  if (first > last || last >= size()) throw_domain("restricted_weights: bad node range");
  if (dyadic) {
    for (std::size_t k = first; k <= last; ++k) w[k] = 1.0;
    return w;
  }
  for (std::size_t k = first; k < last; ++k) {
    const double half = 0.5 * std::log(nodes[k + 1] / nodes[k]);
    w[k] += half;
    w[k + 1] += half;
  }
  return w;
}

const char* to_string(NondegMode mode) {
  switch (mode) {
    case NondegMode::continuous: return "continuous";
    case NondegMode::discrete: return "discrete";
    case NondegMode::torus: return "torus";
  }
  return "?";
}

NondegeneracyReport check_nondegenerate(const RadialSymbol& sym, NondegMode mode, std::span<const double> radii,
                                        double tol) {
  if (radii.empty()) throw_domain("check_nondegenerate: empty test set");
  NondegeneracyReport rep;
  rep.mode = mode;
  rep.tested = radii.size();
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const double r : radii) {
    if (!(r > 0.0)) throw_domain("check_nondegenerate: test set must exclude 0");
    double witness = nan;
    if (mode == NondegMode::discrete) {
      // windows (a, 2a], a = 2^{i/8}, each sampled at 64 points
      for (int i = -8 * 60; i <= 8 * 60 && std::isnan(witness); ++i) {
        const double a = std::exp2(i / 8.0) / r;
        bool ok = true;
        for (int q = 1; q <= 64 && ok; ++q) ok = std::abs(eval_symbol(sym, a * std::exp2(q / 64.0) * r)) > tol;
        if (ok) witness = a;
      }
    } else {
      const double lo = mode == NondegMode::torus ? -20.0 : -40.0;
      const double hi = mode == NondegMode::torus ? 0.0 : 40.0;
      const int steps = 4000;
      for (int i = 1; i < steps && std::isnan(witness); ++i) {
        const double eps = std::exp2(lo + (hi - lo) * i / steps);
        if (std::abs(eval_symbol(sym, eps * r)) > tol) witness = eps;
      }
    }
    rep.witnesses.push_back(witness);
    if (std::isnan(witness)) rep.failing.push_back(r);
  }
  rep.pass = rep.failing.empty();
  return rep;
}

std::vector<double> lattice_radii(const GridSpec& grid) {
  const int half = grid.N / 2;
  std::set<long> sq;
  const int d = grid.d;
  for (int a = 0; a <= half; ++a)
    for (int b = 0; b <= (d >= 2 ? half : 0); ++b)
      for (int c = 0; c <= (d >= 3 ? half : 0); ++c) {
        const long s = static_cast<long>(a) * a + static_cast<long>(b) * b + static_cast<long>(c) * c;
        if (s >= 1 && s <= static_cast<long>(half) * half) sq.insert(s);
      }
  std::vector<double> out;
  out.reserve(sq.size());
  for (long s : sq) out.push_back(std::sqrt(static_cast<double>(s)));
  return out;
}

}  // namespace opharm

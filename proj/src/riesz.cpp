#include "opharm/riesz.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "opharm/error.hpp"

namespace opharm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Integral of the absolute radial envelope; sets the absolute error scale.
double envelope_mass(double alpha, int d) {
  return d == 1 ? 2.0 * std::tgamma(alpha + 1.0) / std::pow(kTwoPi, alpha + 1.0)
                : kTwoPi * std::tgamma(alpha + 2.0) / std::pow(kTwoPi, alpha + 2.0);
}

double upper_limit(double alpha, int d) {
  double R = 1.0;
  while (std::pow(R, alpha + d - 1) * std::exp(-kTwoPi * R) > 1e-22) R += 0.5;
  return R;
}

// P_nu(x) = 2F1(-nu, nu + 1; 1; (1 - x)/2) for 0 <= x <= 1, where the
// argument stays below 1/2; terminates for integer nu.
double legendre_function(double nu, double x) {
  const double z = 0.5 * (1.0 - x);
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < 400; ++k) {
    term *= (k - nu) * (k + nu + 1.0) / ((k + 1.0) * (k + 1.0)) * z;
    sum += term;
    if (term == 0.0 || (k > nu && std::abs(term) < 1e-18 * std::abs(sum))) break;
  }
  return sum;
}

void check_args(double alpha, int d) {
  if (!(alpha > 0.0)) throw_domain("riesz_poisson_spatial needs alpha > 0");
  if (d != 1 && d != 2) throw_domain("riesz_poisson_spatial supports d = 1, 2");
}

}  // namespace

double riesz_poisson_spatial(double alpha, double radius, int d) {
  check_args(alpha, d);
  const double s = std::abs(radius);
  if (d == 1) {
    // 2 Re int_0^inf x^alpha e^{-2 pi x (1 - i s)} dx
    return 2.0 * std::tgamma(alpha + 1.0) * std::pow(std::complex<double>(kTwoPi, -kTwoPi * s), -(alpha + 1.0)).real();
  }
  // 2 pi int_0^inf x^{mu-1} e^{-a x} J0(b x) dx = 2 pi Gamma(mu) rho^-mu P_{mu-1}(a / rho)
  const double mu = alpha + 2.0;
  const double a = kTwoPi;
  const double rho = std::hypot(a, kTwoPi * s);
  return kTwoPi * std::tgamma(mu) * std::pow(rho, -mu) * legendre_function(mu - 1.0, a / rho);
}

double riesz_poisson_spatial_quadrature(double alpha, double radius, int d) {
  check_args(alpha, d);
  const double s = std::abs(radius);
  auto integrand = [&](double x) -> double {
    if (x <= 0.0) return 0.0;
    const double radial = std::pow(x, alpha) * std::exp(-kTwoPi * x);
    if (d == 1) return 2.0 * radial * std::cos(kTwoPi * s * x);
    return kTwoPi * x * radial * std::cyl_bessel_j(0.0, kTwoPi * s * x);
  };
  const double R = upper_limit(alpha, d);
  const double panel = s > 0.0 ? std::min(0.25, 0.5 / s) : 0.25;
  const auto panels = static_cast<long>(std::ceil(R / panel));
  double value = 0.0;
  double err_total = 0.0;
  for (long i = 0; i < panels; ++i) {
    const double lo = static_cast<double>(i) * R / static_cast<double>(panels);
    const double hi = static_cast<double>(i + 1) * R / static_cast<double>(panels);
    double err = 0.0;
    value += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(integrand, lo, hi, 8, 1e-13, &err);
    err_total += err;
  }
  const double budget = 1e-9 * std::abs(value) + 1e-13 * envelope_mass(alpha, d);
  if (err_total > budget) throw AccuracyError("riesz_poisson_spatial_quadrature: error estimate exceeds budget");
  return value;
}

DecayReport bessel_decay_report(double alpha, double sigma, std::span<const double> radii, int d) {
  if (radii.empty()) throw_domain("bessel_decay_report needs radii");
  if (!std::is_sorted(radii.begin(), radii.end())) throw_domain("radii must be increasing");
  DecayReport rep;
  rep.alpha = alpha;
  rep.sigma = sigma;
  rep.d = d;
  rep.radii.assign(radii.begin(), radii.end());
  for (const double r : radii) {
    const double g = std::pow(1.0 + r * r, 0.5 * (d + sigma)) * std::abs(riesz_poisson_spatial(alpha, r, d));
    rep.values.push_back(g);
    rep.max_value = std::max(rep.max_value, g);
  }
  const double rmax = radii.back();
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < radii.size(); ++i)
    if (radii[i] >= rmax / 10.0 && radii[i] > 0.0 && rep.values[i] > 0.0) {
      lx.push_back(std::log(radii[i]));
      ly.push_back(std::log(rep.values[i]));
    }
  if (lx.size() >= 2) {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      mx += lx[i];
      my += ly[i];
    }
    mx /= static_cast<double>(lx.size());
    my /= static_cast<double>(lx.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sxy += (lx[i] - mx) * (ly[i] - my);
      sxx += (lx[i] - mx) * (lx[i] - mx);
    }
    rep.tail_slope = sxx > 0.0 ? sxy / sxx : 0.0;
  }
  rep.bounded = std::isfinite(rep.max_value) && rep.tail_slope <= 0.05;
  return rep;
}

KernelBoundReport kernel_decay_report(double alpha, double sigma, int d, std::span<const double> eps_list,
                                      std::span<const double> radii) {
  KernelBoundReport rep;
  for (const double eps : eps_list) {
    if (!(eps > 0.0)) throw_domain("kernel_decay_report needs eps > 0");
    for (const double r : radii) {
      const double value = std::pow(eps, -d) * std::abs(riesz_poisson_spatial(alpha, r / eps, d));
      double bound = std::pow(eps, -d);
      if (r > 0.0) bound = std::min(bound, std::pow(eps, sigma) / std::pow(r, d + sigma));
      const double ratio = value / bound;
      if (ratio > rep.constant) {
        rep.constant = ratio;
        rep.worst_eps = eps;
        rep.worst_radius = r;
      }
    }
  }
  return rep;
}

double multiplier_bound(const RadialSymbol& sym, const ScaleGrid& sgrid, std::span<const double> radii) {
  double worst = 0.0;
  for (const double r : radii) {
    double acc = 0.0;
    for (std::size_t k = 0; k < sgrid.size(); ++k) {
      const double v = eval_symbol(sym, sgrid.nodes[k] * r);
      acc += sgrid.weights[k] * v * v;
    }
    worst = std::max(worst, std::sqrt(acc));
  }
  return worst;
}

nlohmann::json to_json(const DecayReport& rep) {
  return {{"alpha", rep.alpha},          {"sigma", rep.sigma},        {"d", rep.d},
          {"radii", rep.radii},          {"values", rep.values},      {"max_value", rep.max_value},
          {"tail_slope", rep.tail_slope}, {"bounded", rep.bounded}};
}

}  // namespace opharm

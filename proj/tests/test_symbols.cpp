#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"

#include "opharm/companion.hpp"
#include "opharm/error.hpp"
#include "opharm/matrix.hpp"
#include "opharm/riesz.hpp"
#include "opharm/symbols.hpp"

using namespace opharm;
using std::numbers::pi;

TEST_CASE("symbol values") {
  CHECK(eval_symbol(RadialSymbol::riesz_poisson(1.0), 1.0) == doctest::Approx(std::exp(-2 * pi)).epsilon(1e-14));
  CHECK(eval_symbol(RadialSymbol::riesz_poisson(1.0), 1.0) == doctest::Approx(1.8674e-3).epsilon(1e-4));
  CHECK(eval_symbol(RadialSymbol::gauss_lp(), 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
  CHECK(eval_symbol(RadialSymbol::d_poisson(), 0.5) == doctest::Approx(pi * std::exp(-pi)).epsilon(1e-14));
  CHECK(eval_symbol(RadialSymbol::poisson(), 0.0) == 1.0);
  for (const auto& s : {RadialSymbol::d_poisson(), RadialSymbol::riesz_poisson(0.5), RadialSymbol::gauss_lp(),
                        RadialSymbol::annulus_bump()}) {
    CHECK(s.vanishing_mean());
    CHECK(eval_symbol(s, 0.0) == 0.0);
  }
  CHECK(annulus_bump_value(1.25) == doctest::Approx(1.0));
  CHECK(annulus_bump_value(0.5) == 0.0);
  CHECK(annulus_bump_value(2.0) == 0.0);
  CHECK(annulus_bump_value(0.6) > 0.0);
}

TEST_CASE("symbol names parse back") {
  for (const auto& s : {RadialSymbol::poisson(), RadialSymbol::d_poisson(), RadialSymbol::riesz_poisson(1.5),
                        RadialSymbol::gauss_lp(), RadialSymbol::annulus_bump()}) {
    const auto t = parse_symbol(s.name());
    CHECK(t.kind == s.kind);
    CHECK(t.alpha == s.alpha);
  }
  CHECK_THROWS_AS(parse_symbol("mexican_hat"), ConfigError);
}

TEST_CASE("scale grids") {
  const auto g = ScaleGrid::log_spaced(1e-3, 2.0, 64);
  double sum = 0.0;
  for (const double w : g.weights) sum += w;
  CHECK(sum == doctest::Approx(std::log(2e3)).epsilon(1e-13));
  for (std::size_t k = 1; k < g.size(); ++k) CHECK(g.nodes[k] > g.nodes[k - 1]);
  const auto dy = ScaleGrid::dyadic_for(GridSpec(1, 32));
  CHECK(dy.nodes.front() == doctest::Approx(1.0 / 64));
  CHECK(dy.nodes.back() == 1.0);
  CHECK(dy.level(0) == 6);
  CHECK_THROWS_AS(ScaleGrid::log_spaced(1.0, 0.5, 8), DomainError);
}

TEST_CASE("nondegeneracy") {
  const auto radii = lattice_radii(GridSpec(2, 32));
  CHECK(check_nondegenerate(RadialSymbol::d_poisson(), NondegMode::continuous, radii).pass);
  const auto disc = check_nondegenerate(RadialSymbol::annulus_bump(), NondegMode::discrete, radii);
  CHECK(disc.pass);
  for (std::size_t i = 0; i < radii.size(); ++i) {
    const double a = disc.witnesses[i];
    // the window (a, 2a] sits inside the support of the bump
    CHECK(a * radii[i] >= 0.5);
    CHECK(2 * a * radii[i] <= 2.0);
  }
  CHECK(check_nondegenerate(RadialSymbol::gauss_lp(), NondegMode::torus, radii).pass);
  RadialSymbol zero = RadialSymbol::d_poisson();
  zero.amplitude = 0.0;
  const auto rep = check_nondegenerate(zero, NondegMode::continuous, radii);
  CHECK_FALSE(rep.pass);
  CHECK(rep.failing.size() == radii.size());
}

TEST_CASE("companion pairs reproduce") {
  const GridSpec grid(2, 64);
  const auto radii = lattice_radii(grid);
  const auto sg = ScaleGrid::companion_default(grid);

  const auto disc = build_companion(RadialSymbol::annulus_bump(), PairMode::discrete, grid);
  CHECK(disc.valid);
  CHECK(disc.residual <= 1e-10);

  for (const auto& phi : {RadialSymbol::d_poisson(), RadialSymbol::gauss_lp(), RadialSymbol::riesz_poisson(1.0)}) {
    const auto pair = build_companion(phi, PairMode::continuous, grid);
    CHECK(pair.valid);
    CHECK(pair.residual <= 1e-6);
    CHECK(reproducing_residual(pair, radii, sg) <= pair.residual * (1 + 1e-12));
    // wider scale window cannot make it worse
    const auto wide = ScaleGrid::log_spaced(sg.eps_min / 2, sg.eps_max * 2, 2 * static_cast<int>(sg.size()));
    CHECK(reproducing_residual(pair, radii, wide) <= pair.residual + 1e-8);
    CHECK(pair.psi(0.0) == 0.0);
  }

  MultiplierPair none = build_companion(RadialSymbol::d_poisson(), PairMode::continuous, grid);
  none.normalizer = kInf;
  CHECK(reproducing_residual(none, radii, sg) == doctest::Approx(1.0));

  RadialSymbol zero = RadialSymbol::gauss_lp();
  zero.amplitude = 0.0;
  CHECK_THROWS_AS(build_companion(zero, PairMode::continuous, grid), DegeneracyError);
  CHECK_THROWS_AS(build_companion(zero, PairMode::discrete, grid), DegeneracyError);
}

TEST_CASE("discrete companion sum by hand") {
  const auto phi = RadialSymbol::annulus_bump();
  const auto pair = build_companion(phi, PairMode::discrete, GridSpec(1, 32));
  for (const double r : {1.0, 1.7, 3.0, 5.5, 16.0}) {
    double energy = 0.0, sum = 0.0;
    for (int j = -12; j <= 12; ++j) {
      const double v = annulus_bump_value(std::ldexp(r, j));
      energy += v * v;
    }
    for (int j = -12; j <= 12; ++j) {
      const double v = annulus_bump_value(std::ldexp(r, j));
      sum += v * v / energy;
    }
    CHECK(dyadic_energy(phi, r) == doctest::Approx(energy).epsilon(1e-14));
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("psi table follows the exact companion") {
  const auto pair = build_companion(RadialSymbol::gauss_lp(), PairMode::continuous, GridSpec(1, 32));
  CHECK(pair.xi_grid.size() == 4096);
  const double peak = pair.psi(1.25);
  for (const double r : {0.55, 0.8, 1.0, 1.25, 1.6, 1.95})
    CHECK(std::abs(pair.psi_tabulated(r) - pair.psi(r)) <= 1e-4 * peak);
  CHECK(pair.psi_tabulated(3.0) == 0.0);
}

namespace {

// Inverse transforms of |xi| e^{-2 pi |xi|} from the Poisson kernels on R and R^2.
double riesz1_line(double s) { return (1 - s * s) / (2 * pi * pi * (1 + s * s) * (1 + s * s)); }
double riesz1_plane(double s) { return (2 - s * s) / (4 * pi * pi * std::pow(1 + s * s, 2.5)); }

}  // namespace

TEST_CASE("Riesz-Poisson kernels in space") {
  CHECK(riesz_poisson_spatial(2.0, 0.0, 1) == doctest::Approx(4.0 / std::pow(2 * pi, 3)).epsilon(1e-13));
  CHECK(riesz_poisson_spatial(2.0, 0.0, 1) == doctest::Approx(1.6127e-2).epsilon(1e-4));
  for (const double s : {0.0, 0.3, 1.0, 2.5, 10.0, 1e3}) {
    CHECK(riesz_poisson_spatial(1.0, s, 1) == doctest::Approx(riesz1_line(s)).epsilon(1e-10));
    CHECK(riesz_poisson_spatial(1.0, s, 2) == doctest::Approx(riesz1_plane(s)).epsilon(1e-10));
    CHECK(riesz_poisson_spatial(1.5, -s, 1) == riesz_poisson_spatial(1.5, s, 1));
  }
  for (const double alpha : {1.0, 2.0, 3.0})
    for (const int d : {1, 2})
      for (const double s : {0.0, 0.5, 2.0}) {
        const double closed = riesz_poisson_spatial(alpha, s, d);
        CHECK(std::abs(closed - riesz_poisson_spatial_quadrature(alpha, s, d)) <= 1e-9 * (1 + std::abs(closed)));
      }
  CHECK_THROWS_AS(riesz_poisson_spatial_quadrature(0.5, 0.0, 1), AccuracyError);
}

TEST_CASE("Riesz-Poisson decay") {
  std::vector<double> radii;
  for (int i = 0; i <= 30; ++i) radii.push_back(std::pow(10.0, 0.1 * i));
  CHECK(bessel_decay_report(1.0, 0.5, radii, 1).bounded);
  CHECK(bessel_decay_report(2.0, 1.0, radii, 1).bounded);
  CHECK(bessel_decay_report(1.0, 0.5, radii, 2).bounded);
  const auto flat = bessel_decay_report(1.0, 0.0, radii, 1);
  CHECK(flat.values.size() == radii.size());
  CHECK(std::isfinite(flat.max_value));

  const std::vector<double> eps{0.05, 0.1, 0.3, 1.0};
  const auto kb = kernel_decay_report(1.0, 0.5, 1, eps, radii);
  CHECK(std::isfinite(kb.constant));
  CHECK(kb.constant > 0.0);
}

TEST_CASE("multiplier bound is finite") {
  const GridSpec grid(2, 32);
  const auto radii = lattice_radii(grid);
  const auto sg = ScaleGrid::torus_default(grid);
  for (const auto& s : {RadialSymbol::d_poisson(), RadialSymbol::gauss_lp(), RadialSymbol::riesz_poisson(1.0),
                        RadialSymbol::annulus_bump()}) {
    const double b = multiplier_bound(s, sg, radii);
    CHECK(std::isfinite(b));
    CHECK(b > 0.0);
  }
}

#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "opharm/corpus.hpp"
#include "opharm/error.hpp"
#include "opharm/quantum.hpp"

using namespace opharm;
using std::numbers::pi;

namespace {

QTElement random_element(const Theta& theta, int band, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  QTElement x;
  x.theta = theta;
  for (int a = -band; a <= band; ++a)
    for (int b = -band; b <= band; ++b) x.coeffs[{a, b, 0}] = cd(g(rng), g(rng));
  return x;
}

double coeff_distance(const QTElement& x, const QTElement& y) {
  double e = 0.0;
  for (const auto& [m, a] : x.coeffs) e = std::max(e, std::abs(a - y.coeff(m)));
  for (const auto& [m, a] : y.coeffs) e = std::max(e, std::abs(a - x.coeff(m)));
  return e;
}

double max_diff(const OperatorField& a, const OperatorField& b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.raw().size(); ++i) e = std::max(e, std::abs(a.raw()[i] - b.raw()[i]));
  return e;
}

// u^k for a unitary u, any integer k.
Matrix upow(const Matrix& u, int k) {
  Matrix out = Matrix::Identity(u.rows(), u.cols());
  const Matrix step = k < 0 ? Matrix(u.adjoint()) : u;
  for (int i = 0; i < std::abs(k); ++i) out = out * step;
  return out;
}

}  // namespace

TEST_CASE("deformation matrix") {
  const Theta t = Theta::rational2(2, 6);
  CHECK(t.entry(1, 0).p == 1);
  CHECK(t.entry(1, 0).q == 3);
  CHECK(t.value(0, 1) == doctest::Approx(-1.0 / 3));
  CHECK(t.value(1, 1) == 0.0);
  // a_2 b_1 / 3 = 25 / 3
  CHECK(t.phase({7, 5, 0}, {5, 7, 0}) == doctest::Approx(1.0 / 3).epsilon(1e-15));
  Theta three(3);
  three.set_rational(2, 0, 1, 4);
  three.set_real(2, 1, std::sqrt(2.0));
  CHECK_FALSE(three.all_rational());
  CHECK(three.value(1, 2) == doctest::Approx(-std::sqrt(2.0)));
  CHECK_THROWS(Theta(4));
}

TEST_CASE("twisted products") {
  const Theta t = Theta::rational2(1, 3);
  for (const LatticeVec m : {LatticeVec{1, 0, 0}, LatticeVec{2, -3, 0}, LatticeVec{-4, 5, 0}}) {
    const auto prod = qt_mul(QTElement::monomial(t, m), QTElement::monomial(t, {-m[0], -m[1], 0}));
    CHECK(prod.coeffs.size() == 1);
    CHECK(std::abs(std::abs(prod.coeff({0, 0, 0})) - 1.0) < 1e-15);
    CHECK(std::abs(prod.coeff({0, 0, 0}) - qt_reorder_phase(t, m, {-m[0], -m[1], 0})) < 1e-15);
    const auto unit = qt_mul(qt_adjoint(QTElement::monomial(t, m)), QTElement::monomial(t, m));
    CHECK(coeff_distance(unit, QTElement::unit(t)) < 1e-15);
  }
  const auto yx = qt_mul(QTElement::monomial(t, {0, 1, 0}), QTElement::monomial(t, {1, 0, 0}));
  CHECK(std::abs(yx.coeff({1, 1, 0}) - std::polar(1.0, 2 * pi / 3)) < 1e-15);
  const auto rep = clock_shift_rep(t);
  CHECK((rep(yx) - rep.U2 * rep.U1).norm() < 1e-12);

  // theta = 0: coefficient convolution
  const Theta z = Theta::zero(2);
  const auto x = random_element(z, 2, 1);
  const auto y = random_element(z, 1, 2);
  const auto xy = qt_mul(x, y);
  for (int a = -3; a <= 3; ++a)
    for (int b = -3; b <= 3; ++b) {
      cd conv = 0.0;
      for (const auto& [m, c] : x.coeffs) conv += c * y.coeff({a - m[0], b - m[1], 0});
      CHECK(std::abs(xy.coeff({a, b, 0}) - conv) < 1e-13);
    }
}

TEST_CASE("adjoint and trace") {
  const Theta z = Theta::zero(2);
  const auto x = random_element(z, 2, 3);
  const auto xs = qt_adjoint(x);
  for (const auto& [m, a] : x.coeffs) CHECK(xs.coeff({-m[0], -m[1], 0}) == std::conj(a));

  const Theta t = Theta::rational2(1, 5);
  const auto rep = clock_shift_rep(t);
  const auto w = random_element(t, 2, 4);
  CHECK((rep(qt_adjoint(w)) - rep(w).adjoint()).norm() < 1e-12);

  CHECK(qt_trace(QTElement::unit(t)) == 1.0);
  CHECK(qt_trace(QTElement::monomial(t, {1, 2, 0})) == 0.0);
  const auto v = random_element(t, 2, 5);
  CHECK(std::abs(qt_trace(qt_mul(w, v)) - qt_trace(qt_mul(v, w))) < 1e-12);
  CHECK(std::abs(qt_fourier(w, {1, -2, 0}) - w.coeff({1, -2, 0})) < 1e-12);
}

TEST_CASE("clock and shift") {
  const auto r1 = clock_shift_rep(Theta::rational2(2, 1));
  CHECK(r1.q == 1);
  CHECK(r1.U1.rows() == 1);

  const auto r2 = clock_shift_rep(Theta::rational2(1, 2));
  Matrix u1(2, 2), u2(2, 2);
  u1 << 1.0, 0.0, 0.0, -1.0;
  u2 << 0.0, 1.0, 1.0, 0.0;
  CHECK((r2.U1 - u1).norm() < 1e-15);
  CHECK((r2.U2 - u2).norm() < 1e-15);
  CHECK((r2.U2 * r2.U1 + r2.U1 * r2.U2).norm() < 1e-15);

  for (const auto& [p, q] : {std::pair{1L, 3L}, {2L, 5L}, {3L, 7L}, {5L, 12L}}) {
    const auto rep = clock_shift_rep(Theta::rational2(p, q));
    CHECK(rep.commutation_residual() <= 1e-15 * q);
    for (const LatticeVec m : {LatticeVec{2, 3, 0}, LatticeVec{-1, 4, 0}})
      CHECK((rep.monomial(m) - upow(rep.U1, m[0]) * upow(rep.U2, m[1])).norm() < 1e-12);
  }
  Theta irr(2);
  irr.set_real(1, 0, std::sqrt(2.0) - 1.0);
  CHECK_THROWS_AS(clock_shift_rep(irr), UnsupportedError);
  CHECK_THROWS_AS(clock_shift_rep(Theta::zero(3)), UnsupportedError);
}

TEST_CASE("transference") {
  const GridSpec grid(2, 16);
  const Theta t = Theta::rational2(1, 3);
  const auto rep = clock_shift_rep(t);
  const auto one = qt_transfer(QTElement::unit(t), grid, rep);
  CHECK(max_diff(one, OperatorField::constant(grid, Matrix::Identity(3, 3))) < 1e-15);
  const LatticeVec m{2, -1, 0};
  const auto mono = qt_transfer(QTElement::monomial(t, m), grid, rep);
  CHECK(max_diff(mono, OperatorField::single_mode(grid, m, rep.monomial(m))) < 1e-13);

  const auto x = random_element(t, 3, 6);
  const auto xt = qt_transfer(x, grid, rep);
  double route = 0.0;
  for (const auto& [k, a] : x.coeffs) route += std::norm(a) * rep.monomial(k).squaredNorm();
  CHECK(lp_field_norm(xt, 2.0) == doctest::Approx(std::sqrt(route)).epsilon(1e-10));
  CHECK(qt_lp_norm(x, 2.0, grid, rep) == doctest::Approx(std::sqrt(3.0 * route / 3.0)).epsilon(1e-10));
  CHECK_THROWS_AS(qt_transfer(random_element(t, 8, 1), grid, rep), BandError);
}

TEST_CASE("conditional expectation") {
  const GridSpec grid(2, 8);
  const Theta t = Theta::rational2(1, 2);
  const auto rep = clock_shift_rep(t);
  const auto x = random_element(t, 2, 7);
  const auto xt = qt_transfer(x, grid, rep);
  CHECK(max_diff(qt_cond_expectation(xt, rep), xt) < 1e-10);

  // a mode carrying the wrong matrix is removed; the matching part is kept
  const LatticeVec m{1, 0, 0};
  Matrix off = rep.monomial({0, 1, 0});
  const auto F = OperatorField::single_mode(grid, m, off + 2.0 * rep.monomial(m));
  const auto E = qt_cond_expectation(F, rep);
  CHECK(max_diff(E, OperatorField::single_mode(grid, m, 2.0 * rep.monomial(m))) < 1e-12);

  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 5; ++trial) {
    OperatorField R(grid, 2);
    for (auto& v : R.raw()) v = cd(g(rng), g(rng));
    CHECK(lp_field_norm(qt_cond_expectation(R, rep), 2.0) <= lp_field_norm(R, 2.0) * (1 + 1e-12));
  }
}

TEST_CASE("quantum Lp norms") {
  const GridSpec grid(2, 8);
  const Theta t = Theta::rational2(2, 5);
  const auto rep = clock_shift_rep(t);
  for (const double p : {1.0, 2.0, 3.0, kInf}) {
    const double expect = p == kInf ? 1.0 : std::pow(5.0, 1.0 / p);
    CHECK(qt_lp_norm(QTElement::unit(t), p, grid, rep) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(qt_lp_norm(QTElement::monomial(t, {1, 3, 0}), p, grid, rep) == doctest::Approx(expect).epsilon(1e-12));
  }
  for (std::uint64_t s = 0; s < 4; ++s) {
    const auto x = random_element(t, 2, 10 + s);
    const auto y = random_element(t, 2, 20 + s);
    for (const double p : {1.0, 2.0, 4.0})
      CHECK(qt_lp_norm(x + y, p, grid, rep) <= qt_lp_norm(x, p, grid, rep) + qt_lp_norm(y, p, grid, rep) + 1e-12);
  }
}

TEST_CASE("quantum Poisson semigroup") {
  const Theta t = Theta::rational2(1, 3);
  const auto x = random_element(t, 3, 8);
  const auto p0 = qt_poisson(x, 0.0);
  CHECK(coeff_distance(p0, x.coeff({0, 0, 0}) * QTElement::unit(t)) == 0.0);
  const LatticeVec m{3, -4, 0};
  CHECK(std::abs(qt_poisson(QTElement::monomial(t, m), 0.5).coeff(m) - std::pow(0.5, 5.0)) < 1e-16);
  for (const double r : {0.1, 0.5, 0.9})
    for (const double s : {0.3, 0.7})
      CHECK(coeff_distance(qt_poisson(qt_poisson(x, r), s), qt_poisson(x, r * s)) <= 1e-14);
  CHECK_THROWS_AS(qt_poisson(x, 1.0), DomainError);
  CHECK_THROWS_AS(qt_poisson_derivative(x, -0.1), DomainError);
  // derivative against a difference quotient
  const double r = 0.6, h = 1e-6;
  const auto d = qt_poisson_derivative(x, r);
  const auto fd = (1.0 / (2 * h)) * (qt_poisson(x, r + h) - qt_poisson(x, r - h));
  CHECK(coeff_distance(d, fd) < 1e-6);
}

TEST_CASE("quantum Hardy norms") {
  const GridSpec grid(2, 16);
  QTHardyOptions opts;
  opts.hardy.grid = ScaleGrid::torus_default(grid, 96);
  const Theta t = Theta::rational2(1, 3);
  const auto rep = clock_shift_rep(t);
  const cd a(-2.0, 1.5);
  for (const double p : {1.0, 2.0})
    CHECK(qt_hardy_norm(a * QTElement::unit(t), p, HardyMethod::phi_radial, grid, rep, opts) ==
          doctest::Approx(std::abs(a)).epsilon(1e-12));

  auto x = random_element(t, 3, 9);
  x.coeffs.erase({0, 0, 0});
  CHECK(qt_hardy_norm(x, 2.0, HardyMethod::poisson_radial, grid, rep, opts) ==
        doctest::Approx(0.5 * qt_lp_norm(x, 2.0, grid, rep)).epsilon(1e-3));

  QTHardyOptions norm = opts;
  norm.trace = TraceConvention::normalized;
  CHECK(qt_hardy_norm(x, 2.0, HardyMethod::phi_radial, grid, rep, norm) ==
        doctest::Approx(qt_hardy_norm(x, 2.0, HardyMethod::phi_radial, grid, rep, opts) / std::sqrt(3.0)).epsilon(1e-12));

  // commutative limit
  const Theta z = Theta::zero(2);
  const auto rz = clock_shift_rep(z);
  const auto y = random_element(z, 3, 11);
  const auto field = qt_transfer(y, grid, rz);
  for (const auto m : {HardyMethod::poisson_radial, HardyMethod::phi_radial, HardyMethod::phi_radial_discrete,
                       HardyMethod::phi_conic})
    for (const double p : {1.0, 3.0})
      CHECK(qt_hardy_norm(y, p, m, grid, rz, opts) == doctest::Approx(hardy_norm(field, p, m, opts.hardy)).epsilon(1e-8));
}

TEST_CASE("element from a field and JSON") {
  const GridSpec grid(2, 16);
  const Theta t = Theta::rational2(1, 4);
  const auto x = random_element(Theta::zero(2), 3, 12);
  const auto f = qt_transfer(x, grid, clock_shift_rep(Theta::zero(2)));
  auto y = element_from_field(f, t);
  CHECK(y.theta == t);
  y.theta = Theta::zero(2);
  CHECK(coeff_distance(x, y) < 1e-12);

  const auto w = random_element(t, 2, 13);
  const auto back = qt_from_json(qt_to_json(w));
  CHECK(back.theta == w.theta);
  CHECK(coeff_distance(back, w) == 0.0);
}

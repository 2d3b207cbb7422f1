#include <cmath>
#include <filesystem>
#include <random>

#include "doctest.h"

#include "opharm/error.hpp"
#include "opharm/field.hpp"
#include "opharm/reference.hpp"

using namespace opharm;

namespace {

Matrix random_matrix(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = cd(g(rng), g(rng));
  return a;
}

// Sum of random modes with ||m||_inf <= band.
OperatorField random_field(const GridSpec& grid, int n, int band, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  OperatorField f(grid, n);
  LatticeVec m{};
  const int hi1 = grid.d >= 2 ? band : 0;
  for (m[0] = -band; m[0] <= band; ++m[0])
    for (m[1] = -hi1; m[1] <= hi1; ++m[1]) f += OperatorField::single_mode(grid, m, random_matrix(n, rng));
  return f;
}

double max_diff(std::span<const cd> a, std::span<const cd> b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
  return e;
}

}  // namespace

TEST_CASE("constant field has only the zero coefficient") {
  const GridSpec grid(2, 8);
  Matrix a(2, 2);
  a << 1.0, cd(0, 2), 3.0, -1.0;
  const auto fhat = fft_forward(OperatorField::constant(grid, a));
  CHECK((Matrix(fhat.coeff({0, 0, 0})) - a).norm() < 1e-14);
  double rest = 0.0;
  for (std::size_t k = 1; k < fhat.size(); ++k) rest = std::max(rest, Matrix(fhat.at(k)).norm());
  CHECK(rest < 1e-14);
  CHECK(fhat.band() == 0);
}

TEST_CASE("single mode lands on its coefficient") {
  const GridSpec grid(2, 16);
  const Matrix a = Matrix::Identity(2, 2) * cd(0.5, -1.0);
  const LatticeVec m0{3, -5, 0};
  const auto fhat = fft_forward(OperatorField::single_mode(grid, m0, a));
  for (std::size_t k = 0; k < fhat.size(); ++k) {
    const Matrix expect = grid.frequency(k) == m0 ? a : Matrix::Zero(2, 2);
    CHECK((Matrix(fhat.at(k)) - expect).norm() < 1e-13);
  }
  CHECK(fhat.band() == 5);
}

TEST_CASE("FFT agrees with direct summation and round-trips") {
  for (const int d : {1, 2})
    for (const int N : {8, 16})
      for (const int n : {1, 2}) {
        const GridSpec grid(d, N);
        const auto f = random_field(grid, n, N / 2 - 1, 11u * N + n + d);
        const auto fast = fft_forward(f);
        const auto slow = reference::direct_dft(f);
        CHECK(max_diff(fast.raw(), slow.raw()) < 1e-10);
        const auto back = fft_inverse(fast);
        CHECK(max_diff(back.raw(), f.raw()) < 1e-12 * (1.0 + lp_field_norm(f, kInf)));
        CHECK(max_diff(reference::direct_synthesis(slow).raw(), f.raw()) < 1e-10);
      }
}

TEST_CASE("Plancherel pairing") {
  const GridSpec grid(2, 16);
  SUBCASE("identity field") {
    const auto one = OperatorField::constant(grid, Matrix::Identity(2, 2));
    CHECK((plancherel_pairing(one, one) - Matrix::Identity(2, 2)).norm() < 1e-14);
  }
  SUBCASE("distinct modes are orthogonal") {
    const auto f = OperatorField::single_mode(grid, {1, 2, 0}, Matrix::Identity(2, 2));
    const auto g = OperatorField::single_mode(grid, {2, 1, 0}, Matrix::Identity(2, 2));
    CHECK(plancherel_pairing(f, g).norm() < 1e-14);
  }
  SUBCASE("spatial and spectral sides agree") {
    const auto f = random_field(grid, 2, 5, 1);
    const auto g = random_field(grid, 2, 5, 2);
    const Matrix a = plancherel_pairing(f, g);
    const Matrix b = spectral_pairing(fft_forward(f), fft_forward(g));
    CHECK((a - b).norm() < 1e-10 * (1.0 + a.norm()));
  }
  SUBCASE("shape mismatch") {
    const auto f = random_field(grid, 2, 3, 1);
    const auto g = random_field(GridSpec(2, 8), 2, 3, 1);
    CHECK_THROWS_AS(plancherel_pairing(f, g), ShapeError);
  }
}

TEST_CASE("matrix calculus") {
  std::mt19937_64 rng(7);
  SUBCASE("abs_square") {
    Matrix a = Matrix::Zero(2, 2);
    a(0, 0) = 3.0;
    a(1, 1) = cd(0, 4);
    Matrix expect = Matrix::Zero(2, 2);
    expect(0, 0) = 9.0;
    expect(1, 1) = 16.0;
    CHECK((abs_square(a) - expect).norm() < 1e-14);
    const Matrix b = random_matrix(3, rng);
    const Eigen::VectorXd sv = singular_values(b);
    Eigen::SelfAdjointEigenSolver<Matrix> es(abs_square(b));
    Eigen::VectorXd ev = es.eigenvalues();
    std::sort(ev.data(), ev.data() + ev.size(), std::greater<>());
    for (int i = 0; i < 3; ++i) CHECK(ev(i) == doctest::Approx(sv(i) * sv(i)).epsilon(1e-12));
  }
  SUBCASE("psd_sqrt") {
    Matrix a = Matrix::Zero(2, 2);
    a(0, 0) = 4.0;
    a(1, 1) = 9.0;
    const Matrix r = psd_sqrt(a);
    CHECK(std::abs(r(0, 0) - 2.0) < 1e-14);
    CHECK(std::abs(r(1, 1) - 3.0) < 1e-14);
    const Matrix g = random_matrix(4, rng);
    const Matrix b = g.adjoint() * g;
    CHECK((psd_sqrt(b * b) - b).norm() < 1e-9 * b.norm());
    CHECK_THROWS_AS(psd_sqrt(g), DomainError);
    CHECK_THROWS_AS(psd_sqrt(Matrix(-Matrix::Identity(2, 2))), NotPsdError);
  }
  SUBCASE("schatten norms") {
    CHECK(schatten_norm(Matrix::Identity(2, 2), 2.0) == doctest::Approx(std::sqrt(2.0)));
    Eigen::VectorXcd u = Eigen::VectorXcd::Random(3).normalized();
    Eigen::VectorXcd v = Eigen::VectorXcd::Random(3).normalized();
    const Matrix uv = u * v.adjoint();
    for (const double p : {1.0, 1.5, 2.0, 4.0, kInf}) CHECK(schatten_norm(uv, p) == doctest::Approx(1.0));
    const Matrix a = random_matrix(4, rng);
    CHECK(schatten_norm(a, 1.0) >= schatten_norm(a, 2.0));
    CHECK(schatten_norm(a, 2.0) >= schatten_norm(a, kInf));
    CHECK_THROWS_AS(schatten_norm(a, 0.5), DomainError);
  }
  SUBCASE("psd order and operator Cauchy-Schwarz") {
    const Matrix I = Matrix::Identity(2, 2);
    CHECK(psd_leq(Matrix::Zero(2, 2), abs_square(random_matrix(2, rng)), 0.0));
    CHECK_FALSE(psd_leq(2.0 * I, I, 1e-10));
    std::uniform_real_distribution<double> U(0.1, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
      Matrix lhs_inner = Matrix::Zero(2, 2);
      Matrix rhs_f = Matrix::Zero(2, 2);
      double rhs_phi = 0.0;
      for (int i = 0; i < 6; ++i) {
        const double w = U(rng);
        const cd phi(U(rng) - 1.0, U(rng) - 1.0);
        const Matrix fi = random_matrix(2, rng);
        lhs_inner += w * phi * fi;
        rhs_phi += w * std::norm(phi);
        rhs_f += w * abs_square(fi);
      }
      CHECK(psd_leq(abs_square(lhs_inner), rhs_phi * rhs_f, 1e-12));
    }
  }
}

TEST_CASE("lp field norms") {
  const GridSpec grid(1, 16);
  const auto one = OperatorField::constant(grid, Matrix::Identity(2, 2));
  for (const double p : {1.0, 2.0, 3.0}) CHECK(lp_field_norm(one, p) == doctest::Approx(std::pow(2.0, 1.0 / p)));

  const auto f = random_field(grid, 2, 5, 3);
  const double l2 = lp_field_norm(f, 2.0);
  CHECK(std::abs(l2 - std::sqrt(plancherel_pairing(f, f).trace().real())) < 1e-12 * l2);
  for (const double p : {1.0, 2.0, 4.0, kInf}) {
    CHECK(std::abs(lp_field_norm(cd(-3.5, 1.0) * f, p) - std::abs(cd(-3.5, 1.0)) * lp_field_norm(f, p)) <
          1e-12 * lp_field_norm(f, p) * 4.0);
    CHECK(lp_field_norm(adjoint(f), p) == doctest::Approx(lp_field_norm(f, p)).epsilon(1e-12));
  }

  const auto s = random_field(grid, 1, 4, 5);
  double classical = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) classical += std::pow(std::abs(s.raw()[i]), 3.0);
  CHECK(lp_field_norm(s, 3.0) == doctest::Approx(std::cbrt(classical / 16.0)).epsilon(1e-12));
  CHECK_THROWS_AS(lp_field_norm(s, 0.9), DomainError);
}

TEST_CASE("field serialization round-trips") {
  const GridSpec grid(2, 8);
  const auto f = random_field(grid, 2, 3, 9);
  const auto g = field_from_json(field_to_json(f));
  CHECK(g.grid() == f.grid());
  CHECK(max_diff(g.raw(), f.raw()) == 0.0);

  const auto path = std::filesystem::temp_directory_path() / "opharm_field_test.bin";
  write_field_binary(f, path);
  const auto h = read_field_binary(path);
  std::filesystem::remove(path);
  CHECK(max_diff(h.raw(), f.raw()) == 0.0);
  CHECK_THROWS_AS(read_field_binary(path), IoError);
}

TEST_CASE("hermitian flag is verified") {
  const GridSpec grid(1, 8);
  Matrix a(2, 2);
  a << 1.0, 2.0, 3.0, 4.0;
  const auto f = OperatorField::constant(grid, a);
  std::vector<cd> v(f.raw().begin(), f.raw().end());
  CHECK_THROWS_AS(OperatorField(grid, 2, v, true), DomainError);
}

#include <cmath>
#include <random>

#include "doctest.h"

#include "opharm/kernels.hpp"
#include "opharm/reference.hpp"
#include "opharm/square.hpp"

using namespace opharm;

namespace {

std::vector<cd> random_blocks(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<cd> v(count);
  for (auto& x : v) x = cd(g(rng), g(rng));
  return v;
}

double max_diff(std::span<const cd> a, std::span<const cd> b) {
  double e = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) e = std::max(e, std::abs(a[i] - b[i]));
  return e;
}

double max_abs(std::span<const cd> a) {
  double e = 0.0;
  for (const cd x : a) e = std::max(e, std::abs(x));
  return e;
}

OperatorField band_field(const GridSpec& grid, int n, int band, std::uint64_t seed) {
  OperatorField f(grid, n);
  LatticeVec m{};
  const int hi = grid.d >= 2 ? band : 0;
  std::size_t s = seed;
  for (m[0] = -band; m[0] <= band; ++m[0])
    for (m[1] = -hi; m[1] <= hi; ++m[1]) {
      const auto c = random_blocks(static_cast<std::size_t>(n * n), ++s);
      f += OperatorField::single_mode(grid, m, ConstMatrixMap(c.data(), n, n));
    }
  return f;
}

}  // namespace

TEST_CASE("cell overlap") {
  CHECK(cell_ball_overlap(2, {0.0, 0.0, 0.0}, 5.0) == doctest::Approx(1.0));
  CHECK(cell_ball_overlap(2, {10.0, 10.0, 0.0}, 5.0) == 0.0);
  CHECK(cell_ball_overlap(1, {-0.5, 0.0, 0.0}, 0.25) == doctest::Approx(0.5));
  for (const int d : {1, 2}) {
    const GridSpec grid(d, 64);
    for (const double R : {0.02, 0.1, 0.3}) {
      const auto ball = ball_kernel(grid, R);
      CHECK(ball.weight_sum() * grid.cell_volume() == doctest::Approx(unit_ball_volume(d) * std::pow(R, d)).epsilon(1e-9));
    }
  }
}

TEST_CASE("parallel ball and box sums match the serial loops") {
  for (const int d : {1, 2}) {
    const GridSpec grid(d, 16);
    const int n = 2;
    const auto a = random_blocks(grid.num_points() * 4, 5u + d);
    for (const double R : {0.03, 0.2, 0.45}) {
      const auto ball = ball_kernel(grid, R, {0.5, 0.5, 0.0});
      std::vector<cd> x(a.size(), 1.0), y(a.size(), 1.0);
      kernels::ball_sum(grid, n, ball, a, 0.7, x);
      reference::ball_sum(grid, n, ball, a, 0.7, y);
      CHECK(max_diff(x, y) < 1e-12 * max_abs(y));
    }
    for (const int side : {1, 2, 8, 16}) {
      std::vector<cd> x(a.size()), y(a.size());
      kernels::box_sums(grid, n, side, a, x);
      reference::box_sums(grid, n, side, a, y);
      CHECK(max_diff(x, y) < 1e-12 * max_abs(y));
    }
  }
}

TEST_CASE("square functions match the direct reference") {
  for (const int d : {1, 2}) {
    const GridSpec grid(d, 16);
    const auto f = band_field(grid, 2, d == 1 ? 6 : 3, 21);
    const auto sg = ScaleGrid::torus_default(grid, 32);
    const auto dy = ScaleGrid::dyadic_for(grid);
    const auto mult = radial_multiplier(RadialSymbol::gauss_lp());
    const auto bump = radial_multiplier(RadialSymbol::annulus_bump());
    for (const auto kind : {SquareKind::radial, SquareKind::conic}) {
      const auto x = square_fn_squares(f, mult, sg, kind);
      const auto y = reference::square_fn_squares(f, mult, sg, kind);
      CHECK(max_diff(x, y) < 1e-10 * max_abs(y));
    }
    for (const auto kind : {SquareKind::radial_discrete, SquareKind::conic_discrete}) {
      const auto x = square_fn_squares(f, bump, dy, kind);
      const auto y = reference::square_fn_squares(f, bump, dy, kind);
      CHECK(max_diff(x, y) < 1e-10 * max_abs(y));
    }
    const auto x = square_fn_squares(f, mult, sg, SquareKind::conic, ConeSpec::stoltz());
    const auto y = reference::square_fn_squares(f, mult, sg, SquareKind::conic, ConeSpec::stoltz());
    CHECK(max_diff(x, y) < 1e-10 * max_abs(y));
  }
}

TEST_CASE("pointwise kernels") {
  const GridSpec grid(1, 8);
  const int n = 3;
  const auto a = random_blocks(grid.num_points() * 9, 2);
  std::vector<cd> acc(a.size(), 0.0);
  kernels::accumulate_abs_square(a, n, 0.5, acc);
  for (std::size_t p = 0; p < grid.num_points(); ++p) {
    const Matrix b = ConstMatrixMap(a.data() + 9 * p, n, n);
    CHECK((Matrix(ConstMatrixMap(acc.data() + 9 * p, n, n)) - 0.5 * abs_square(b)).norm() < 1e-13);
  }
  const auto roots = kernels::psd_sqrt_field(grid, n, acc);
  for (std::size_t p = 0; p < grid.num_points(); ++p) {
    const Matrix r = roots.value(p);
    CHECK((r * r - Matrix(ConstMatrixMap(acc.data() + 9 * p, n, n))).norm() < 1e-10);
  }

  const auto f = band_field(GridSpec(1, 8), 2, 3, 4);
  const auto fhat = fft_forward(f);
  std::vector<cd> mult(fhat.size());
  for (std::size_t k = 0; k < mult.size(); ++k) mult[k] = cd(static_cast<double>(k), 1.0);
  std::vector<cd> out(fhat.raw().size());
  kernels::scale_spectrum(fhat, mult, out);
  for (std::size_t k = 0; k < fhat.size(); ++k)
    CHECK((Matrix(ConstMatrixMap(out.data() + 4 * k, 2, 2)) - mult[k] * Matrix(fhat.at(k))).norm() < 1e-13);
}

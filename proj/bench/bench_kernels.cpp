#include <benchmark/benchmark.h>

#include <random>

#include "opharm/kernels.hpp"
#include "opharm/reference.hpp"

namespace {

using namespace opharm;

OperatorField random_field(const GridSpec& grid, int n) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  std::vector<cd> v(grid.num_points() * static_cast<std::size_t>(n * n));
  for (auto& x : v) x = {normal(rng), normal(rng)};
  return OperatorField(grid, n, std::move(v));
}

OperatorField band_limited_field(const GridSpec& grid, int n) {
  SpectrumField fhat = fft_forward(random_field(grid, n));
  for (std::size_t slot = 0; slot < fhat.size(); ++slot)
    if (sup_norm(grid.frequency(slot)) >= grid.N / 2) fhat.at(slot).setZero();
  return fft_inverse(fhat);
}

void BM_FFT(benchmark::State& state) {
  const OperatorField f = random_field(GridSpec(2, static_cast<int>(state.range(0))), 2);
  for (auto _ : state) benchmark::DoNotOptimize(fft_forward(f));
}
BENCHMARK(BM_FFT)->Arg(16)->Arg(32)->Arg(64);

void BM_DirectDFT(benchmark::State& state) {
  const OperatorField f = random_field(GridSpec(2, static_cast<int>(state.range(0))), 2);
  for (auto _ : state) benchmark::DoNotOptimize(reference::direct_dft(f));
}
BENCHMARK(BM_DirectDFT)->Arg(16)->Arg(32);

void BM_BallSum(benchmark::State& state) {
  const GridSpec grid(2, 64);
  const OperatorField f = random_field(grid, 2);
  const BallKernel ball = ball_kernel(grid, state.range(0) / 64.0);
  std::vector<cd> out(f.raw().size());
  for (auto _ : state) {
    if (state.range(1) == 0)
      reference::ball_sum(grid, 2, ball, f.raw(), 1.0, out);
    else
      kernels::ball_sum(grid, 2, ball, f.raw(), 1.0, out);
    benchmark::ClobberMemory();
  }
}
BENCHMARK(BM_BallSum)->ArgNames({"radius_cells", "parallel"})->ArgsProduct({{2, 8}, {0, 1}});

void BM_BoxSums(benchmark::State& state) {
  const GridSpec grid(2, 64);
  const OperatorField f = random_field(grid, 2);
  std::vector<cd> out(f.raw().size());
  for (auto _ : state) {
    if (state.range(1) == 0)
      reference::box_sums(grid, 2, static_cast<int>(state.range(0)), f.raw(), out);
    else
      kernels::box_sums(grid, 2, static_cast<int>(state.range(0)), f.raw(), out);
    benchmark::ClobberMemory();
  }
}
BENCHMARK(BM_BoxSums)->ArgNames({"side", "parallel"})->ArgsProduct({{4, 16}, {0, 1}});

void BM_ConicSquare(benchmark::State& state) {
  const GridSpec grid(1, 32);
  const OperatorField f = band_limited_field(grid, 2);
  const ScaleGrid sgrid = ScaleGrid::torus_default(grid, 32);
  const auto mult = radial_multiplier(RadialSymbol::gauss_lp());
  for (auto _ : state) {
    if (state.range(0) == 0)
      benchmark::DoNotOptimize(reference::square_fn_squares(f, mult, sgrid, SquareKind::conic));
    else
      benchmark::DoNotOptimize(square_fn_squares(f, mult, sgrid, SquareKind::conic));
  }
}
BENCHMARK(BM_ConicSquare)->ArgName("parallel")->Arg(0)->Arg(1);

}  // namespace

BENCHMARK_MAIN();

#pragma once

#include "opharm/square.hpp"

/// Serial, unoptimized counterparts of the production paths. Used as test
/// oracles and as the baseline in the benchmarks.
namespace opharm::reference {

/// fhat(m) = h^d sum_s f(s) e^{-2 pi i m.s} by direct O(N^{2d}) summation.
SpectrumField direct_dft(const OperatorField& f);

/// f(s) = sum_m fhat(m) e^{2 pi i m.s} by direct summation.
OperatorField direct_synthesis(const SpectrumField& fhat);

/// Serial version of kernels::ball_sum.
void ball_sum(const GridSpec& grid, int n, const BallKernel& kernel, std::span<const cd> a, double scale,
              std::span<cd> out);

/// out(c) = sum over the box [c, c + side)^d by direct summation.
void box_sums(const GridSpec& grid, int n, int side, std::span<const cd> a, std::span<cd> out);

/// Square function with direct synthesis of every slice and, for conic
/// kinds, direct ball summation per lattice point. Returns the unrooted squares.
std::vector<cd> square_fn_squares(const OperatorField& f, const ScaleMultiplier& mult, const ScaleGrid& sgrid,
                                  SquareKind kind, const ConeSpec& cone = {});

}  // namespace opharm::reference

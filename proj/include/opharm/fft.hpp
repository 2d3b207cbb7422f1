#pragma once

#include <span>

#include "opharm/grid.hpp"
#include "opharm/matrix.hpp"

namespace opharm::fft {

enum class Direction { forward = -1, backward = +1 };

/// In-place, unnormalized lattice DFT of `howmany` interleaved sequences:
/// element c of lattice point p lives at data[p * howmany + c].
/// forward computes sum_s x(s) e^{-2 pi i m.s}, backward the conjugate kernel.
/// Safe to call concurrently; plans are cached per (d, N, howmany, direction).
void transform(const GridSpec& grid, int howmany, std::span<cd> data, Direction dir);

}  // namespace opharm::fft

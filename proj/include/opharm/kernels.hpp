#pragma once

#include <array>
#include <memory>
#include <span>
#include <vector>

#include "opharm/field.hpp"
#include "opharm/grid.hpp"
#include "opharm/matrix.hpp"

namespace opharm {

/// How a ball integral over lattice samples is weighted.
///  cell_overlap: each sample carries the exact volume of its cell inside the ball.
///  lattice: samples strictly inside the ball carry h^d; balls below one cell use c_d r^d.
enum class BallRule { cell_overlap, lattice };

const char* to_string(BallRule rule);

/// Lattice offsets t and dimensionless weights: the ball integral of g is
/// h^d sum_t weight_t g(base + t).
struct BallKernel {
  std::vector<LatticeVec> offsets;
  std::vector<double> weights;

  double weight_sum() const;
};

/// Ball of physical radius `radius` centred at base + centre (centre in cell units).
BallKernel ball_kernel(const GridSpec& grid, double radius, const std::array<double, 3>& centre = {0.0, 0.0, 0.0},
                       BallRule rule = BallRule::cell_overlap);

/// Fraction of the unit cell [lo, lo+1]^d lying in the ball of radius R about the origin.
double cell_ball_overlap(int d, const std::array<double, 3>& lo, double R);

/// Unnormalized DFT of a centred ball kernel folded onto the torus; cached and thread safe.
std::shared_ptr<const std::vector<cd>> ball_kernel_spectrum(const GridSpec& grid, double radius, BallRule rule);

/// OpenMP hot loops. Each has a serial counterpart in reference.hpp.
namespace kernels {

/// out(slot) = mult(slot) * fhat(slot), block-wise.
void scale_spectrum(const SpectrumField& fhat, std::span<const cd> mult, std::span<cd> out);

/// acc(s) += weight * slice(s)^* slice(s).
void accumulate_abs_square(std::span<const cd> slice, int n, double weight, std::span<cd> acc);

/// Pointwise psd_sqrt of Hermitian-symmetrized blocks, clipping against the
/// largest block norm of the field.
OperatorField psd_sqrt_field(const GridSpec& grid, int n, std::span<const cd> squares);

/// out(s) += scale * sum_t w_t a(s + t).
void ball_sum(const GridSpec& grid, int n, const BallKernel& kernel, std::span<const cd> a, double scale,
              std::span<cd> out);

/// out(c) = sum of a over the box [c, c + side)^d (cells, periodic), every corner c.
void box_sums(const GridSpec& grid, int n, int side, std::span<const cd> a, std::span<cd> out);

}  // namespace kernels

}  // namespace opharm

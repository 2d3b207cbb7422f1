#include "opharm/grid.hpp"

#include <bit>
#include <numbers>
#include <string>

#include "opharm/error.hpp"

namespace opharm {

namespace {
constexpr int kMaxLog2Points = 22;
}

GridSpec::GridSpec(int dim, int points_per_axis) : d(dim), N(points_per_axis) {
  if (d < 1 || d > 3) throw_domain("grid dimension must be 1, 2 or 3");
  if (N < 2 || (N & (N - 1)) != 0) throw_domain("points per axis must be a power of two >= 2");
  const int log2n = std::countr_zero(static_cast<unsigned>(N));
  if (d * log2n > kMaxLog2Points) throw_domain("grid exceeds 2^22 points");
}

std::size_t GridSpec::num_points() const {
  std::size_t n = 1;
  for (int i = 0; i < d; ++i) n *= static_cast<std::size_t>(N);
  return n;
}

std::size_t GridSpec::flat(const LatticeVec& idx) const {
  std::size_t f = 0;
  for (int i = 0; i < d; ++i) f = f * static_cast<std::size_t>(N) + static_cast<std::size_t>(wrap(idx[i], N));
  return f;
}

LatticeVec GridSpec::unflat(std::size_t flat_index) const {
  LatticeVec idx{0, 0, 0};
  for (int i = d - 1; i >= 0; --i) {
    idx[i] = static_cast<int>(flat_index % static_cast<std::size_t>(N));
    flat_index /= static_cast<std::size_t>(N);
  }
  return idx;
}

LatticeVec GridSpec::frequency(std::size_t flat_index) const {
  LatticeVec m = unflat(flat_index);
  for (int i = 0; i < d; ++i)
    if (m[i] >= N / 2) m[i] -= N;
  return m;
}

std::size_t GridSpec::frequency_slot(const LatticeVec& m) const { return flat(m); }

std::array<double, 3> GridSpec::coords(std::size_t flat_index) const {
  const LatticeVec idx = unflat(flat_index);
  return {idx[0] * h(), idx[1] * h(), idx[2] * h()};
}

double unit_ball_volume(int d) {
  switch (d) {
    case 1: return 2.0;
    case 2: return std::numbers::pi;
    case 3: return 4.0 * std::numbers::pi / 3.0;
    default: throw_domain("unit_ball_volume: d must be 1..3 (got " + std::to_string(d) + ")");
  }
}

}  // namespace opharm

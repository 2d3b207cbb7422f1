#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <cstddef>
#include <vector>

namespace opharm {

/// Integer lattice vector; components beyond the grid dimension are zero.
using LatticeVec = std::array<int, 3>;

inline double euclidean_norm(const LatticeVec& m) {
  return std::sqrt(static_cast<double>(m[0]) * m[0] + static_cast<double>(m[1]) * m[1] +
                   static_cast<double>(m[2]) * m[2]);
}

inline int sup_norm(const LatticeVec& m) {
  return std::max({std::abs(m[0]), std::abs(m[1]), std::abs(m[2])});
}

/// Uniform lattice on the unit torus [0,1)^d with N points per axis.
struct GridSpec {
  int d = 1;
  int N = 16;

  GridSpec() = default;
  GridSpec(int dim, int points_per_axis);

  double h() const { return 1.0 / N; }
  /// Cell volume h^d.
  double cell_volume() const { return std::pow(h(), d); }
  std::size_t num_points() const;

  /// Row-major flattening of a lattice index (entries taken mod N).
  std::size_t flat(const LatticeVec& idx) const;
  LatticeVec unflat(std::size_t flat_index) const;

  /// Frequency m in {-N/2, ..., N/2-1}^d stored at a flat FFT position.
  LatticeVec frequency(std::size_t flat_index) const;
  /// Flat FFT position of a frequency (taken mod N).
  std::size_t frequency_slot(const LatticeVec& m) const;

  /// Spatial coordinate of a lattice point.
  std::array<double, 3> coords(std::size_t flat_index) const;

  bool operator==(const GridSpec& o) const { return d == o.d && N == o.N; }
};

/// Unit-ball volume c_d.
double unit_ball_volume(int d);

inline int wrap(int i, int n) {
  const int r = i % n;
  return r < 0 ? r + n : r;
}

}  // namespace opharm

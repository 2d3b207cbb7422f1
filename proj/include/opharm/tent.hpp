#pragma once

#include <vector>

#include "opharm/scale_field.hpp"

namespace opharm {

/// Matrix function F(s, u, eps_k) on lattice x cone samples: for each scale the
/// offsets u are the lattice points with |u| h < eps (just {0} below one cell).
struct TentField {
  GridSpec grid;
  int n = 1;
  ScaleGrid sgrid;
  std::vector<std::vector<LatticeVec>> offsets;  // per scale
  std::vector<std::vector<cd>> values;           // per scale: [s][u] n x n blocks

  /// Zero field with the standard cone sampling.
  static TentField zeros(const GridSpec& grid, int n, const ScaleGrid& sgrid);

  MatrixMap at(std::size_t k, std::size_t s, std::size_t u);
  ConstMatrixMap at(std::size_t k, std::size_t s, std::size_t u) const;
};

/// P(F)(s, eps) = average over |u| < eps of F(s - u, u, eps).
ScaleField tent_project(const TentField& F);

/// lift(G)(s, u, eps) = G(s + u, eps): the range of the projection.
TentField tent_lift(const ScaleField& G);

/// (sum_k w_k eps_k^-d h^{2d} sum_{s,u} tr|F|^2)^{1/2}.
double tent_l2_norm(const TentField& F);

}  // namespace opharm

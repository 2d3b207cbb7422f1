#include "opharm/tent.hpp"

#include <cmath>

#include "opharm/error.hpp"

namespace opharm {

namespace {

std::vector<LatticeVec> cone_offsets(const GridSpec& grid, double eps) {
  const double R = eps / grid.h();
  std::vector<LatticeVec> out;
  const int r = static_cast<int>(std::ceil(R));
  const int d = grid.d;
  for (int a = -r; a <= r; ++a)
    for (int b = (d >= 2 ? -r : 0); b <= (d >= 2 ? r : 0); ++b)
      for (int c = (d >= 3 ? -r : 0); c <= (d >= 3 ? r : 0); ++c)
        if (static_cast<double>(a) * a + static_cast<double>(b) * b + static_cast<double>(c) * c < R * R)
          out.push_back({a, b, c});
  if (out.empty()) out.push_back({0, 0, 0});
  return out;
}

}  // namespace

TentField TentField::zeros(const GridSpec& grid, int n, const ScaleGrid& sgrid) {
  TentField F;
  F.grid = grid;
  F.n = n;
  F.sgrid = sgrid;
  const std::size_t b = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  for (const double eps : sgrid.nodes) {
    F.offsets.push_back(cone_offsets(grid, eps));
    F.values.emplace_back(grid.num_points() * F.offsets.back().size() * b, cd{0.0, 0.0});
  }
  return F;
}

MatrixMap TentField::at(std::size_t k, std::size_t s, std::size_t u) {
  const std::size_t b = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  return {values[k].data() + (s * offsets[k].size() + u) * b, n, n};
}

ConstMatrixMap TentField::at(std::size_t k, std::size_t s, std::size_t u) const {
  const std::size_t b = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  return {values[k].data() + (s * offsets[k].size() + u) * b, n, n};
}

ScaleField tent_project(const TentField& F) {
  if (F.offsets.size() != F.sgrid.size() || F.values.size() != F.sgrid.size()) throw_shape("tent field shape mismatch");
  ScaleField out;
  out.grid = F.grid;
  out.n = F.n;
  out.sgrid = F.sgrid;
  const std::size_t np = F.grid.num_points();
  for (std::size_t k = 0; k < F.sgrid.size(); ++k) {
    const auto& offs = F.offsets[k];
    if (F.values[k].size() != np * offs.size() * static_cast<std::size_t>(F.n * F.n))
      throw_shape("tent field values do not match the cone sampling");
    OperatorField slice(F.grid, F.n);
    const double inv = 1.0 / static_cast<double>(offs.size());
#pragma omp parallel for schedule(static)
    for (std::size_t p = 0; p < np; ++p) {
      const LatticeVec s = F.grid.unflat(p);
      RowMajorMatrix acc = RowMajorMatrix::Zero(F.n, F.n);
      for (std::size_t u = 0; u < offs.size(); ++u) {
        const std::size_t q = F.grid.flat({s[0] - offs[u][0], s[1] - offs[u][1], s[2] - offs[u][2]});
        acc += F.at(k, q, u);
      }
      slice.at(p) = acc * inv;
    }
    out.slices.push_back(std::move(slice));
  }
  return out;
}

TentField tent_lift(const ScaleField& G) {
  TentField F = TentField::zeros(G.grid, G.n, G.sgrid);
  const std::size_t np = G.grid.num_points();
  for (std::size_t k = 0; k < G.size(); ++k) {
    const auto& offs = F.offsets[k];
#pragma omp parallel for schedule(static)
    for (std::size_t p = 0; p < np; ++p) {
      const LatticeVec s = G.grid.unflat(p);
      for (std::size_t u = 0; u < offs.size(); ++u)
        F.at(k, p, u) = G.slice(k).at(G.grid.flat({s[0] + offs[u][0], s[1] + offs[u][1], s[2] + offs[u][2]}));
    }
  }
  return F;
}

double tent_l2_norm(const TentField& F) {
  const double h2d = F.grid.cell_volume() * F.grid.cell_volume();
  double total = 0.0;
  for (std::size_t k = 0; k < F.sgrid.size(); ++k) {
    double acc = 0.0;
    for (const cd& v : F.values[k]) acc += std::norm(v);
    total += F.sgrid.weights[k] * std::pow(F.sgrid.nodes[k], -F.grid.d) * h2d * acc;
  }
  return std::sqrt(total);
}

}  // namespace opharm

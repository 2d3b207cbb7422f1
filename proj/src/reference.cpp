#include "opharm/reference.hpp"

#include <cmath>
#include <numbers>

#include "opharm/error.hpp"

namespace opharm::reference {

namespace {

// e^{sign 2 pi i m.s / N} with the phase reduced exactly mod N.
cd lattice_phase(const GridSpec& grid, const LatticeVec& m, const LatticeVec& s, int sign) {
  long phase = 0;
  for (int i = 0; i < grid.d; ++i) phase += static_cast<long>(m[i]) * s[i];
  phase %= grid.N;
  return std::polar(1.0, sign * 2.0 * std::numbers::pi * static_cast<double>(phase) / grid.N);
}

}  // namespace

SpectrumField direct_dft(const OperatorField& f) {
  const GridSpec& grid = f.grid();
  SpectrumField out(grid, f.n());
  const double hd = grid.cell_volume();
  for (std::size_t k = 0; k < grid.num_points(); ++k) {
    const LatticeVec m = grid.frequency(k);
    RowMajorMatrix acc = RowMajorMatrix::Zero(f.n(), f.n());
    for (std::size_t p = 0; p < grid.num_points(); ++p) acc += lattice_phase(grid, m, grid.unflat(p), -1) * f.at(p);
    out.at(k) = acc * hd;
  }
  return out;
}

OperatorField direct_synthesis(const SpectrumField& fhat) {
  const GridSpec& grid = fhat.grid();
  OperatorField out(grid, fhat.n());
  for (std::size_t p = 0; p < grid.num_points(); ++p) {
    const LatticeVec s = grid.unflat(p);
    RowMajorMatrix acc = RowMajorMatrix::Zero(fhat.n(), fhat.n());
    for (std::size_t k = 0; k < grid.num_points(); ++k) acc += lattice_phase(grid, grid.frequency(k), s, +1) * fhat.at(k);
    out.at(p) = acc;
  }
  return out;
}

void ball_sum(const GridSpec& grid, int n, const BallKernel& kernel, std::span<const cd> a, double scale,
              std::span<cd> out) {
  const std::size_t b = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  const std::size_t np = grid.num_points();
  if (a.size() != np * b || out.size() != np * b) throw_shape("ball_sum: size mismatch");
  for (std::size_t p = 0; p < np; ++p) {
    const LatticeVec s = grid.unflat(p);
    for (std::size_t i = 0; i < kernel.offsets.size(); ++i) {
      const LatticeVec& t = kernel.offsets[i];
      const std::size_t q = grid.flat({s[0] + t[0], s[1] + t[1], s[2] + t[2]});
      for (std::size_t e = 0; e < b; ++e) out[p * b + e] += scale * kernel.weights[i] * a[q * b + e];
    }
  }
}

void box_sums(const GridSpec& grid, int n, int side, std::span<const cd> a, std::span<cd> out) {
  const std::size_t b = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  const std::size_t np = grid.num_points();
  if (a.size() != np * b || out.size() != np * b) throw_shape("box_sums: size mismatch");
  const int d = grid.d;
  for (std::size_t p = 0; p < np; ++p) {
    const LatticeVec c = grid.unflat(p);
    for (std::size_t e = 0; e < b; ++e) out[p * b + e] = 0.0;
    for (int x = 0; x < side; ++x)
      for (int y = 0; y < (d >= 2 ? side : 1); ++y)
        for (int z = 0; z < (d >= 3 ? side : 1); ++z) {
          const std::size_t q = grid.flat({c[0] + x, c[1] + y, c[2] + z});
          for (std::size_t e = 0; e < b; ++e) out[p * b + e] += a[q * b + e];
        }
  }
}

std::vector<cd> square_fn_squares(const OperatorField& f, const ScaleMultiplier& mult, const ScaleGrid& sgrid,
                                  SquareKind kind, const ConeSpec& cone) {
  const GridSpec& grid = f.grid();
  const int n = f.n();
  const std::size_t b = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  const bool conic = kind == SquareKind::conic || kind == SquareKind::conic_discrete;
  const SpectrumField fhat = direct_dft(f);
  std::vector<cd> out(f.raw().size(), cd{0.0, 0.0});
  for (std::size_t k = 0; k < sgrid.size(); ++k) {
    const double eps = sgrid.nodes[k];
    if (conic && eps > cone.eps_max * (1.0 + 1e-12)) continue;
    SpectrumField g(grid, n);
    for (std::size_t slot = 0; slot < grid.num_points(); ++slot)
      g.at(slot) = mult(eps, grid.frequency(slot)) * fhat.at(slot);
    const OperatorField slice = direct_synthesis(g);
    std::vector<cd> sq(out.size(), cd{0.0, 0.0});
    for (std::size_t p = 0; p < grid.num_points(); ++p) {
      const Matrix a = slice.value(p);
      MatrixMap(sq.data() + p * b, n, n) = a.adjoint() * a;
    }
    if (!conic) {
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += sgrid.weights[k] * sq[i];
    } else {
      const BallKernel ball = ball_kernel(grid, cone.aperture * eps, {0.0, 0.0, 0.0}, cone.rule);
      ball_sum(grid, n, ball, sq, sgrid.weights[k] * std::pow(eps, -grid.d) * grid.cell_volume(), out);
    }
  }
  return out;
}

}  // namespace opharm::reference

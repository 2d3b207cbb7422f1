#include "opharm/bmo.hpp"

#include <cmath>
#include <numbers>

#include "opharm/error.hpp"
#include "opharm/kernels.hpp"
#include "opharm/scale_field.hpp"

namespace opharm {

namespace {

std::size_t block_of(int n) { return static_cast<std::size_t>(n) * static_cast<std::size_t>(n); }

// All vectors of {0, step, ..., (count-1) step}^d.
std::vector<LatticeVec> lattice_box(int d, int count, int step) {
  std::vector<LatticeVec> out;
  for (int a = 0; a < count; ++a)
    for (int b = 0; b < (d >= 2 ? count : 1); ++b)
      for (int c = 0; c < (d >= 3 ? count : 1); ++c) out.push_back({a * step, b * step, c * step});
  return out;
}

template <class Fn>
void for_each_cell(const GridSpec& grid, const Cube& Q, Fn&& fn) {
  const int d = grid.d;
  for (int x = 0; x < Q.side; ++x)
    for (int y = 0; y < (d >= 2 ? Q.side : 1); ++y)
      for (int z = 0; z < (d >= 3 ? Q.side : 1); ++z)
        fn(grid.flat({Q.corner[0] + x, Q.corner[1] + y, Q.corner[2] + z}));
}

Matrix hermitian_part(const ConstMatrixMap& a) { return 0.5 * (Matrix(a) + Matrix(a.adjoint())); }

void check_q(double q, int n) {
  if (!(q > 2.0)) throw_domain("BMO/Carleson exponent q must exceed 2");
  if (q != kInf && n != 1) throw UnsupportedError("q < inf is implemented for scalar fields only");
}

// (h^d sum_s a(s)^{q/2})^{2/q}
double lq2_norm(const GridSpec& grid, const std::vector<double>& a, double q) {
  double acc = 0.0;
  for (const double v : a) acc += std::pow(std::max(v, 0.0), q / 2.0);
  return std::pow(grid.cell_volume() * acc, 2.0 / q);
}

// Per-level box sums of f and f^* f.
struct LevelSums {
  std::vector<cd> first;
  std::vector<cd> second;
};

std::vector<cd> block_abs_square(const OperatorField& f) {
  std::vector<cd> out(f.raw().size(), cd{0.0, 0.0});
  kernels::accumulate_abs_square(f.raw(), f.n(), 1.0, out);
  return out;
}

// Accumulates sum_{eps_k <= side/2} w_k |Phi_{eps_k} * f|^2 for every level and
// turns the per-level totals into cube averages.
CarlesonReport tent_report(const OperatorField& f, const ScaleMultiplier& mult, const ScaleGrid& sgrid,
                           const CubeFamily& family, double q) {
  const GridSpec& grid = f.grid();
  const int n = f.n();
  const std::size_t b = block_of(n);
  check_q(q, n);
  if (!(family.grid == grid)) throw_shape("cube family and field live on different grids");

  ScaleGrid clipped;
  clipped.dyadic = sgrid.dyadic;
  for (std::size_t k = 0; k < sgrid.size(); ++k)
    if (sgrid.nodes[k] <= 0.5 * (1.0 + 1e-12)) {
      clipped.nodes.push_back(sgrid.nodes[k]);
      clipped.weights.push_back(sgrid.weights[k]);
    }
  if (!clipped.nodes.empty()) {
    clipped.eps_min = clipped.nodes.front();
    clipped.eps_max = clipped.nodes.back();
  }

  // levels in order of increasing tent height
  const int J = family.max_level;
  std::vector<std::vector<cd>> snapshot(J + 1);
  std::vector<cd> acc(f.raw().size(), cd{0.0, 0.0});
  int pending = J;
  auto height = [](int j) { return 0.5 * std::ldexp(1.0, -j); };
  auto flush_below = [&](double eps) {
    while (pending >= 0 && eps > height(pending) * (1.0 + 1e-12)) snapshot[pending--] = acc;
  };
  if (!clipped.nodes.empty()) {
    stream_scales(fft_forward(f), mult, clipped, [&](std::size_t k, std::span<const cd> slice) {
      flush_below(clipped.nodes[k]);
      kernels::accumulate_abs_square(slice, n, clipped.weights[k], acc);
    });
  }
  while (pending >= 0) snapshot[pending--] = acc;

  CarlesonReport report;
  report.q = q;
  std::vector<double> a(q == kInf ? 0 : grid.num_points(), 0.0);
  for (int j = 0; j <= J; ++j) {
    const int L = family.side(j);
    std::vector<cd> sums(acc.size());
    kernels::box_sums(grid, n, L, snapshot[j], sums);
    const double inv = 1.0 / std::pow(static_cast<double>(L), grid.d);
    for (const Cube& Q : family.cubes(j)) {
      CarlesonRow row;
      row.cube = Q;
      row.value = hermitian_part(ConstMatrixMap(sums.data() + grid.flat(Q.corner) * b, n, n)) * inv;
      row.value_opnorm = op_norm(row.value);
      if (q != kInf) for_each_cell(grid, Q, [&](std::size_t s) { a[s] = std::max(a[s], row.value_opnorm); });
      report.rows.push_back(std::move(row));
    }
  }
  for (std::size_t i = 0; i < report.rows.size(); ++i)
    if (report.rows[i].value_opnorm > report.rows[report.witness].value_opnorm) report.witness = i;
  report.sup_norm = report.rows.empty() ? 0.0 : report.rows[report.witness].value_opnorm;
  if (q != kInf) report.sup_norm = lq2_norm(grid, a, q);
  return report;
}

}  // namespace

const char* to_string(ShiftMode mode) {
  switch (mode) {
    case ShiftMode::none:
      return "none";
    case ShiftMode::half_cell:
      return "half_cell";
    case ShiftMode::all:
      return "all";
  }
  return "?";
}

ShiftMode parse_shift_mode(const std::string& text) {
  if (text == "none") return ShiftMode::none;
  if (text == "half_cell") return ShiftMode::half_cell;
  if (text == "all") return ShiftMode::all;
  throw ConfigError("unknown shift mode '" + text + "'");
}

CubeFamily::CubeFamily(const GridSpec& g, int J, ShiftMode s) : grid(g), shifts(s) {
  const int log2n = static_cast<int>(std::lround(std::log2(g.N)));
  if ((1 << log2n) != g.N) throw_domain("cube families need N a power of two");
  max_level = J < 0 ? log2n : J;
  if (max_level > log2n) throw_domain("cube level finer than the lattice");
}

std::vector<LatticeVec> CubeFamily::shift_offsets(int level) const {
  const int L = side(level);
  if (level == 0 || shifts == ShiftMode::none) return {LatticeVec{0, 0, 0}};
  if (shifts == ShiftMode::half_cell) {
    if (L < 2) return {LatticeVec{0, 0, 0}};
    return lattice_box(grid.d, 2, L / 2);
  }
  return lattice_box(grid.d, L, 1);
}

std::vector<Cube> CubeFamily::cubes(int level) const {
  const int L = side(level);
  const auto offsets = shift_offsets(level);
  const auto corners = lattice_box(grid.d, 1 << level, L);
  std::vector<Cube> out;
  out.reserve(offsets.size() * corners.size());
  for (std::size_t si = 0; si < offsets.size(); ++si)
    for (std::size_t ci = 0; ci < corners.size(); ++ci) {
      Cube Q;
      Q.level = level;
      Q.shift = static_cast<int>(si);
      Q.index = ci;
      Q.side = L;
      for (int i = 0; i < 3; ++i) Q.corner[i] = corners[ci][i] + offsets[si][i];
      out.push_back(Q);
    }
  return out;
}

std::vector<Cube> CubeFamily::all_cubes() const {
  std::vector<Cube> out;
  for (int j = 0; j <= max_level; ++j) {
    auto c = cubes(j);
    out.insert(out.end(), c.begin(), c.end());
  }
  return out;
}

Matrix cube_mean(const OperatorField& f, const Cube& Q) {
  if (Q.side <= 0) throw_domain("empty cube");
  RowMajorMatrix acc = RowMajorMatrix::Zero(f.n(), f.n());
  for_each_cell(f.grid(), Q, [&](std::size_t s) { acc += f.at(s); });
  return acc / std::pow(static_cast<double>(Q.side), f.grid().d);
}

double bmo_norm(const OperatorField& f, const CubeFamily& family, double q) {
  const GridSpec& grid = f.grid();
  const int n = f.n();
  const std::size_t b = block_of(n);
  check_q(q, n);
  if (!(family.grid == grid)) throw_shape("cube family and field live on different grids");

  const std::vector<cd> ff = block_abs_square(f);
  std::vector<double> a(q == kInf ? 0 : grid.num_points(), 0.0);
  double sup_osc = 0.0;
  std::vector<cd> s1(ff.size()), s2(ff.size());
  for (int j = 0; j <= family.max_level; ++j) {
    const int L = family.side(j);
    kernels::box_sums(grid, n, L, f.raw(), s1);
    kernels::box_sums(grid, n, L, ff, s2);
    const double inv = 1.0 / std::pow(static_cast<double>(L), grid.d);
    for (const Cube& Q : family.cubes(j)) {
      const std::size_t c = grid.flat(Q.corner) * b;
      const Matrix mean = ConstMatrixMap(s1.data() + c, n, n) * inv;
      const Matrix osc = hermitian_part(ConstMatrixMap(s2.data() + c, n, n)) * inv - mean.adjoint() * mean;
      const double v = op_norm(osc);
      sup_osc = std::max(sup_osc, v);
      if (q != kInf) for_each_cell(grid, Q, [&](std::size_t s) { a[s] = std::max(a[s], v); });
    }
  }
  const double mean_part = op_norm(field_mean(f));
  if (q == kInf) return std::max(mean_part, std::sqrt(sup_osc));
  return std::max(mean_part, std::sqrt(lq2_norm(grid, a, q)));
}

nlohmann::json to_json(const CarlesonReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < report.rows.size(); ++i) {
    const auto& r = report.rows[i];
    rows.push_back({{"level", r.cube.level},
                    {"shift", r.cube.shift},
                    {"cube_index", r.cube.index},
                    {"value_opnorm", r.value_opnorm},
                    {"witness", i == report.witness}});
  }
  return {{"q", report.q == kInf ? nlohmann::json("inf") : nlohmann::json(report.q)},
          {"sup_norm", report.sup_norm},
          {"rows", rows}};
}

CarlesonReport carleson_norm(const OperatorField& f, const MultiplierPair& pair, const CubeFamily& family, double q,
                             const CarlesonOptions& opts) {
  const ScaleGrid sgrid = opts.grid ? *opts.grid : ScaleGrid::torus_default(f.grid());
  if (sgrid.dyadic) throw ConfigError("carleson_norm needs a continuous scale grid");
  const ScaleMultiplier mult = opts.use_psi ? psi_multiplier(pair) : radial_multiplier(pair.phi);
  return tent_report(f, mult, sgrid, family, q);
}

CarlesonReport discrete_carleson_norm(const OperatorField& f, const MultiplierPair& pair, const CubeFamily& family,
                                      const CarlesonOptions& opts) {
  const ScaleGrid sgrid = opts.grid ? *opts.grid : ScaleGrid::dyadic_for(f.grid());
  if (!sgrid.dyadic) throw ConfigError("discrete_carleson_norm needs dyadic scale levels");
  const ScaleMultiplier mult = opts.use_psi ? psi_multiplier(pair) : radial_multiplier(pair.phi);
  return tent_report(f, mult, sgrid, family, kInf);
}

std::vector<double> default_poisson_nodes() {
  std::vector<double> out;
  for (int i = 0; i < 32; ++i) out.push_back((1.0 - std::ldexp(1.0, -10)) * std::sin(std::numbers::pi * i / 62.0));
  return out;
}

double poisson_bmo_norm(const OperatorField& f, std::span<const double> r_nodes) {
  for (const double r : r_nodes)
    if (!(r >= 0.0 && r < 1.0)) throw_domain("Poisson nodes must lie in [0, 1)");
  const GridSpec& grid = f.grid();
  const GridSpec fine(grid.d, 2 * grid.N);
  const int n = f.n();
  const std::size_t b = block_of(n);
  const SpectrumField fhat = fft_forward(f);

  auto poisson = [](SpectrumField& g, double r) {
    for (std::size_t slot = 0; slot < g.size(); ++slot) {
      const double a = euclidean_norm(g.grid().frequency(slot));
      g.at(slot) *= a == 0.0 ? 1.0 : std::pow(r, a);
    }
  };

  double sup = 0.0;
  for (const double r : r_nodes) {
    // f - P_r f, resynthesized on the doubled lattice so that its square is alias free
    SpectrumField g(fine, n);
    for (std::size_t slot = 0; slot < fhat.size(); ++slot) {
      const LatticeVec m = grid.frequency(slot);
      const double a = euclidean_norm(m);
      const double keep = a == 0.0 ? 0.0 : 1.0 - std::pow(r, a);
      g.coeff(m) = keep * fhat.at(slot);
    }
    const OperatorField diff = fft_inverse(g);
    OperatorField sq(fine, n, block_abs_square(diff));
    SpectrumField sqhat = fft_forward(sq);
    poisson(sqhat, r);
    const OperatorField smoothed = fft_inverse(sqhat);
    double local = 0.0;
#pragma omp parallel for reduction(max : local) schedule(static)
    for (std::size_t p = 0; p < grid.num_points(); ++p) {
      const LatticeVec s = grid.unflat(p);
      const std::size_t q = fine.flat({2 * s[0], 2 * s[1], 2 * s[2]});
      local = std::max(local, op_norm(hermitian_part(ConstMatrixMap(smoothed.raw().data() + q * b, n, n))));
    }
    sup = std::max(sup, local);
  }
  return std::max(op_norm(field_mean(f)), std::sqrt(sup));
}

double poisson_bmo_norm(const OperatorField& f) {
  const auto nodes = default_poisson_nodes();
  return poisson_bmo_norm(f, nodes);
}

}  // namespace opharm

#include "opharm/square.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "opharm/error.hpp"
#include "opharm/fft.hpp"

namespace opharm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool is_conic(SquareKind kind) { return kind == SquareKind::conic || kind == SquareKind::conic_discrete; }
bool is_discrete(SquareKind kind) {
  return kind == SquareKind::radial_discrete || kind == SquareKind::conic_discrete;
}

void check_kind_grid(SquareKind kind, const ScaleGrid& sgrid) {
  if (sgrid.size() == 0) throw_domain("empty scale grid");
  if (is_discrete(kind) != sgrid.dyadic) throw_domain("discrete square functions need a dyadic grid and vice versa");
}

std::size_t last_node_within(const ScaleGrid& sgrid, double eps_max) {
  std::size_t last = 0;
  bool any = false;
  for (std::size_t k = 0; k < sgrid.size(); ++k)
    if (sgrid.nodes[k] <= eps_max * (1.0 + 1e-12)) {
      last = k;
      any = true;
    }
  if (!any) throw_domain("no scale node below the cone truncation");
  return last;
}

std::vector<cd> abs_squares(const OperatorField& slice) {
  std::vector<cd> out(slice.raw().size(), cd{0.0, 0.0});
  kernels::accumulate_abs_square(slice.raw(), slice.n(), 1.0, out);
  return out;
}

// Multi-indices alpha with |alpha|_1 <= d.
std::vector<LatticeVec> low_order_indices(int d) {
  std::vector<LatticeVec> out;
  for (int a = 0; a <= d; ++a)
    for (int b = 0; b <= (d >= 2 ? d : 0); ++b)
      for (int c = 0; c <= (d >= 3 ? d : 0); ++c)
        if (a + b + c <= d) out.push_back({a, b, c});
  return out;
}

Matrix hermitian_block(std::span<const cd> v, std::size_t p, int n) {
  const std::size_t b = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  ConstMatrixMap a(v.data() + p * b, n, n);
  return 0.5 * (Matrix(a) + Matrix(a.adjoint()));
}

}  // namespace

const char* to_string(SquareKind kind) {
  switch (kind) {
    case SquareKind::radial: return "radial";
    case SquareKind::conic: return "conic";
    case SquareKind::radial_discrete: return "radial_discrete";
    case SquareKind::conic_discrete: return "conic_discrete";
  }
  return "?";
}

SquareAccumulator::SquareAccumulator(const GridSpec& grid, int n, SquareKind kind, const ConeSpec& cone)
    : grid_(grid), n_(n), kind_(kind), cone_(cone) {
  if (!(cone.aperture > 0.0) || !(cone.eps_max > 0.0)) throw_domain("cone needs positive aperture and eps_max");
  const std::size_t total = grid.num_points() * static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  if (is_conic(kind)) {
    spectral_.assign(total, cd{0.0, 0.0});
    scratch_.assign(total, cd{0.0, 0.0});
  } else {
    acc_.assign(total, cd{0.0, 0.0});
  }
}

void SquareAccumulator::add(double eps, double weight, std::span<const cd> slice) {
  if (!is_conic(kind_)) {
    kernels::accumulate_abs_square(slice, n_, weight, acc_);
    return;
  }
  if (eps > cone_.eps_max * (1.0 + 1e-12)) return;
  std::fill(scratch_.begin(), scratch_.end(), cd{0.0, 0.0});
  kernels::accumulate_abs_square(slice, n_, 1.0, scratch_);
  const auto b = static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_);
  fft::transform(grid_, static_cast<int>(b), scratch_, fft::Direction::forward);
  const auto kernel = ball_kernel_spectrum(grid_, cone_.aperture * eps, cone_.rule);
  const double c = weight * std::pow(eps, -grid_.d) * grid_.cell_volume();
  const std::size_t np = grid_.num_points();
#pragma omp parallel for schedule(static)
  for (std::size_t k = 0; k < np; ++k) {
    const cd factor = c * std::conj((*kernel)[k]);
    for (std::size_t e = 0; e < b; ++e) spectral_[k * b + e] += factor * scratch_[k * b + e];
  }
}

std::vector<cd> SquareAccumulator::squares() const {
  if (!is_conic(kind_)) return acc_;
  std::vector<cd> out = spectral_;
  const auto b = static_cast<int>(static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_));
  fft::transform(grid_, b, out, fft::Direction::backward);
  const double inv = 1.0 / static_cast<double>(grid_.num_points());
  for (auto& v : out) v *= inv;
  return out;
}

OperatorField SquareAccumulator::finish() const { return kernels::psd_sqrt_field(grid_, n_, squares()); }

OperatorField square_fn(const ScaleField& sf, SquareKind kind, const ConeSpec& cone) {
  check_kind_grid(kind, sf.sgrid);
  SquareAccumulator acc(sf.grid, sf.n, kind, cone);
  for (std::size_t k = 0; k < sf.size(); ++k) acc.add(sf.sgrid.nodes[k], sf.sgrid.weights[k], sf.slice(k).raw());
  return acc.finish();
}

std::vector<cd> square_fn_squares(const OperatorField& f, const ScaleMultiplier& mult, const ScaleGrid& sgrid,
                                  SquareKind kind, const ConeSpec& cone) {
  check_kind_grid(kind, sgrid);
  SquareAccumulator acc(f.grid(), f.n(), kind, cone);
  stream_scales(fft_forward(f), mult, sgrid,
                [&](std::size_t k, std::span<const cd> slice) { acc.add(sgrid.nodes[k], sgrid.weights[k], slice); });
  return acc.squares();
}

OperatorField square_fn(const OperatorField& f, const ScaleMultiplier& mult, const ScaleGrid& sgrid, SquareKind kind,
                        const ConeSpec& cone) {
  return kernels::psd_sqrt_field(f.grid(), f.n(), square_fn_squares(f, mult, sgrid, kind, cone));
}

Matrix TruncatedProfile::square(std::size_t idx, std::size_t s) const {
  const std::size_t b = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  return ConstMatrixMap(squares.at(idx).data() + s * b, n, n);
}

std::size_t dyadic_start_node(const ScaleGrid& sgrid, int d, int j) {
  const double threshold = std::sqrt(static_cast<double>(d)) * std::ldexp(1.0, -j);
  for (std::size_t k = 0; k < sgrid.size(); ++k)
    if (sgrid.nodes[k] >= threshold * (1.0 - 1e-12)) return k;
  return sgrid.size();
}

TruncatedProfile truncated_conic(const ScaleField& sf, TruncatedVariant variant, const ConeSpec& cone) {
  if (sf.size() == 0) throw_domain("empty scale field");
  const GridSpec& grid = sf.grid;
  const int d = grid.d;
  const std::size_t kmax = last_node_within(sf.sgrid, cone.eps_max);
  const std::size_t total = grid.num_points() * static_cast<std::size_t>(sf.n) * static_cast<std::size_t>(sf.n);
  const double hd = grid.cell_volume();

  std::vector<std::vector<cd>> a(kmax + 1);
  for (std::size_t k = 0; k <= kmax; ++k) a[k] = abs_squares(sf.slice(k));

  TruncatedProfile prof;
  prof.variant = variant;
  prof.grid = grid;
  prof.n = sf.n;

  if (variant != TruncatedVariant::Sdyadic) {
    for (std::size_t i = 0; i <= kmax; ++i) {
      const double eps_i = sf.sgrid.nodes[i];
      const std::vector<double> w = sf.sgrid.restricted_weights(i, kmax);
      std::vector<cd> sq(total, cd{0.0, 0.0});
      for (std::size_t k = i; k <= kmax; ++k) {
        if (w[k] == 0.0) continue;
        const double r = sf.sgrid.nodes[k];
        const double radius = variant == TruncatedVariant::S ? r - 0.5 * eps_i : 0.5 * r;
        const BallKernel ball = ball_kernel(grid, radius, {0.0, 0.0, 0.0}, cone.rule);
        kernels::ball_sum(grid, sf.n, ball, a[k], w[k] * std::pow(r, -d) * hd, sq);
      }
      prof.params.push_back(eps_i);
      prof.squares.push_back(std::move(sq));
    }
    return prof;
  }

  int J = 0;
  while ((1 << J) < grid.N) ++J;
  const std::size_t b = static_cast<std::size_t>(sf.n) * static_cast<std::size_t>(sf.n);
  for (int j = 0; j <= J; ++j) {
    std::vector<cd> sq(total, cd{0.0, 0.0});
    const std::size_t start = dyadic_start_node(sf.sgrid, d, j);
    const int L = grid.N >> j;
    const int per_axis = grid.N / L;
    std::size_t cubes = 1;
    for (int i = 0; i < d; ++i) cubes *= static_cast<std::size_t>(per_axis);
    if (start <= kmax) {
#pragma omp parallel for schedule(dynamic)
      for (std::size_t q = 0; q < cubes; ++q) {
        LatticeVec idx{0, 0, 0};
        std::size_t rem = q;
        for (int i = d - 1; i >= 0; --i) {
          idx[i] = static_cast<int>(rem % static_cast<std::size_t>(per_axis));
          rem /= static_cast<std::size_t>(per_axis);
        }
        // cube holds lattice points aL+1 .. aL+L; centre at aL + L/2 (cell units)
        std::array<double, 3> centre{0.0, 0.0, 0.0};
        for (int i = 0; i < d; ++i) centre[i] = idx[i] * L + 0.5 * L;
        Matrix value = Matrix::Zero(sf.n, sf.n);
        for (std::size_t k = start; k <= kmax; ++k) {
          const double r = sf.sgrid.nodes[k];
          const BallKernel ball = ball_kernel(grid, r, centre, cone.rule);
          const double c = sf.sgrid.weights[k] * std::pow(r, -d) * hd;
          for (std::size_t t = 0; t < ball.offsets.size(); ++t) {
            const std::size_t p = grid.flat(ball.offsets[t]);
            value += (c * ball.weights[t]) * Matrix(ConstMatrixMap(a[k].data() + p * b, sf.n, sf.n));
          }
        }
        LatticeVec s{0, 0, 0};
        std::size_t members = 1;
        for (int i = 0; i < d; ++i) members *= static_cast<std::size_t>(L);
        for (std::size_t m = 0; m < members; ++m) {
          std::size_t r = m;
          for (int i = d - 1; i >= 0; --i) {
            s[i] = idx[i] * L + 1 + static_cast<int>(r % static_cast<std::size_t>(L));
            r /= static_cast<std::size_t>(L);
          }
          MatrixMap(sq.data() + grid.flat(s) * b, sf.n, sf.n) = value;
        }
      }
    }
    prof.params.push_back(j);
    prof.squares.push_back(std::move(sq));
  }
  return prof;
}

DominationReport radial_conic_domination_check(const OperatorField& f, const RadialSymbol& sym,
                                               const ScaleGrid& sgrid, const ConeSpec& cone) {
  const SquareKind rk = sgrid.dyadic ? SquareKind::radial_discrete : SquareKind::radial;
  const SquareKind ck = sgrid.dyadic ? SquareKind::conic_discrete : SquareKind::conic;
  const std::vector<cd> radial = square_fn_squares(f, radial_multiplier(sym), sgrid, rk, cone);
  std::vector<cd> conic(radial.size(), cd{0.0, 0.0});
  for (const LatticeVec& alpha : low_order_indices(f.grid().d)) {
    const std::vector<cd> part = square_fn_squares(f, derivative_multiplier(sym, alpha), sgrid, ck, cone);
    for (std::size_t i = 0; i < conic.size(); ++i) conic[i] += part[i];
  }
  DominationReport rep;
  rep.constants.resize(f.size());
  for (std::size_t p = 0; p < f.size(); ++p) {
    rep.constants[p] = domination_constant(hermitian_block(radial, p, f.n()), hermitian_block(conic, p, f.n()));
    if (rep.constants[p] > rep.max_constant) {
      rep.max_constant = rep.constants[p];
      rep.worst_point = p;
    }
  }
  return rep;
}

DerivIdentityReport poisson_deriv_identity_check(const OperatorField& f, int k, std::span<const double> eps_list) {
  static const std::vector<std::vector<double>> stencils = {
      {-0.5, 0.0, 0.5},
      {-1.0 / 12.0, 4.0 / 3.0, -2.5, 4.0 / 3.0, -1.0 / 12.0},
      {0.125, -1.0, 1.625, 0.0, -1.625, 1.0, -0.125},
  };
  if (k < 1 || k > 3) throw_domain("poisson_deriv_identity_check supports k = 1, 2, 3");
  const SpectrumField fhat = fft_forward(f);
  require_band_limited(fhat);
  const std::vector<double>& c = stencils[static_cast<std::size_t>(k - 1)];
  const int half = static_cast<int>(c.size() / 2);
  double stencil_mass = 0.0;
  for (double v : c) stencil_mass += std::abs(v);

  // the mean is constant in eps, so it is dropped before differencing
  const ScaleMultiplier poisson = poisson_multiplier();
  const ScaleMultiplier nonconstant_poisson = [&poisson](double eps, const LatticeVec& m) {
    return m == LatticeVec{0, 0, 0} ? cd{0.0, 0.0} : poisson(eps, m);
  };

  DerivIdentityReport rep;
  rep.k = k;
  for (const double eps : eps_list) {
    if (!(eps > 0.0)) throw_domain("eps must be positive");
    const double delta = eps * 1e-3;
    const OperatorField lhs = apply_multiplier(fhat, radial_multiplier(RadialSymbol::riesz_poisson(k)), eps);
    OperatorField rhs(f.grid(), f.n());
    double pmax = 0.0;
    for (int i = -half; i <= half; ++i) {
      const double coeff = c[static_cast<std::size_t>(i + half)];
      const OperatorField pe = apply_multiplier(fhat, nonconstant_poisson, eps + i * delta);
      pmax = std::max(pmax, lp_field_norm(pe, kInf));
      if (coeff != 0.0) rhs += cd{coeff, 0.0} * pe;
    }
    const double factor = std::pow(-1.0 / kTwoPi, k) * std::pow(eps, k) / std::pow(delta, k);
    rhs *= cd{factor, 0.0};

    double lmax = 0.0, diff = 0.0;
    for (std::size_t p = 0; p < f.size(); ++p) {
      lmax = std::max(lmax, lhs.at(p).norm());
      diff = std::max(diff, (lhs.at(p) - rhs.at(p)).norm());
    }
    const double roundoff = stencil_mass * 1e-16 * pmax * std::abs(factor);
    if (lmax > 0.0 && roundoff > 1e-3 * lmax) throw ConditioningError("eps too small for stable differencing");
    const double rel = lmax > 0.0 ? diff / lmax : (diff > 1e-300 ? diff : 0.0);
    rep.eps.push_back(eps);
    rep.discrepancy.push_back(rel);
    rep.max_discrepancy = std::max(rep.max_discrepancy, rel);
  }
  return rep;
}

}  // namespace opharm

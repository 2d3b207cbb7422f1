#include "opharm/scale_field.hpp"

#include <cmath>
#include <numbers>

#include "opharm/error.hpp"
#include "opharm/fft.hpp"
#include "opharm/kernels.hpp"

namespace opharm {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<cd> multiplier_table(const GridSpec& grid, const ScaleMultiplier& mult, double scale) {
  std::vector<cd> table(grid.num_points());
  for (std::size_t k = 0; k < table.size(); ++k) table[k] = mult(scale, grid.frequency(k));
  return table;
}

}  // namespace

ScaleMultiplier radial_multiplier(const RadialSymbol& sym) {
  return [sym](double eps, const LatticeVec& m) { return cd{eval_symbol(sym, eps * euclidean_norm(m)), 0.0}; };
}

ScaleMultiplier psi_multiplier(const MultiplierPair& pair) {
  return [pair](double eps, const LatticeVec& m) { return cd{pair.psi(eps * euclidean_norm(m)), 0.0}; };
}

ScaleMultiplier derivative_multiplier(const RadialSymbol& sym, const LatticeVec& alpha) {
  return [sym, alpha](double eps, const LatticeVec& m) {
    cd factor{1.0, 0.0};
    for (int i = 0; i < 3; ++i)
      for (int e = 0; e < alpha[i]; ++e) factor *= cd{0.0, kTwoPi * eps * m[i]};
    return factor * eval_symbol(sym, eps * euclidean_norm(m));
  };
}

ScaleMultiplier poisson_multiplier() {
  return [](double eps, const LatticeVec& m) { return cd{std::exp(-kTwoPi * eps * euclidean_norm(m)), 0.0}; };
}

void require_band_limited(const SpectrumField& fhat) {
  if (fhat.band() >= fhat.grid().N / 2) throw BandError("field is not band-limited below N/2");
}

OperatorField apply_multiplier(const SpectrumField& fhat, const ScaleMultiplier& mult, double scale) {
  const std::vector<cd> table = multiplier_table(fhat.grid(), mult, scale);
  std::vector<cd> buf(fhat.raw().size());
  kernels::scale_spectrum(fhat, table, buf);
  fft::transform(fhat.grid(), static_cast<int>(fhat.block()), buf, fft::Direction::backward);
  return OperatorField(fhat.grid(), fhat.n(), std::move(buf));
}

void stream_scales(const SpectrumField& fhat, const ScaleMultiplier& mult, const ScaleGrid& sgrid,
                   const std::function<void(std::size_t k, std::span<const cd> slice)>& sink) {
  if (sgrid.size() == 0) throw_domain("empty scale grid");
  require_band_limited(fhat);
  std::vector<cd> buf(fhat.raw().size());
  for (std::size_t k = 0; k < sgrid.size(); ++k) {
    const std::vector<cd> table = multiplier_table(fhat.grid(), mult, sgrid.nodes[k]);
    kernels::scale_spectrum(fhat, table, buf);
    fft::transform(fhat.grid(), static_cast<int>(fhat.block()), buf, fft::Direction::backward);
    sink(k, buf);
  }
}

ScaleField convolve_scales(const OperatorField& f, const ScaleMultiplier& mult, const ScaleGrid& sgrid) {
  ScaleField sf;
  sf.grid = f.grid();
  sf.n = f.n();
  sf.sgrid = sgrid;
  sf.slices.reserve(sgrid.size());
  stream_scales(fft_forward(f), mult, sgrid, [&](std::size_t, std::span<const cd> slice) {
    sf.slices.emplace_back(f.grid(), f.n(), std::vector<cd>(slice.begin(), slice.end()));
  });
  return sf;
}

ScaleField convolve_scales(const OperatorField& f, const RadialSymbol& sym, const ScaleGrid& sgrid) {
  return convolve_scales(f, radial_multiplier(sym), sgrid);
}

}  // namespace opharm

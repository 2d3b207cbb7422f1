#pragma once

#include <functional>
#include <span>
#include <vector>

#include "opharm/companion.hpp"
#include "opharm/field.hpp"
#include "opharm/symbols.hpp"

namespace opharm {

/// Fourier multiplier of Phi_eps evaluated at a lattice frequency.
using ScaleMultiplier = std::function<cd(double scale, const LatticeVec& m)>;

/// phi(eps |m|).
ScaleMultiplier radial_multiplier(const RadialSymbol& sym);
/// psi(eps |m|) of a companion pair.
ScaleMultiplier psi_multiplier(const MultiplierPair& pair);
/// Symbol of D^alpha Phi at scale eps: (2 pi i eps m)^alpha phi(eps |m|).
ScaleMultiplier derivative_multiplier(const RadialSymbol& sym, const LatticeVec& alpha);
/// r^{|m|} with r = e^{-2 pi eps}: the circular Poisson semigroup.
ScaleMultiplier poisson_multiplier();

/// Throws BandError unless every nonzero coefficient has ||m||_inf < N/2.
void require_band_limited(const SpectrumField& fhat);

/// Phi_{eps_k} * f on every node of a scale grid.
struct ScaleField {
  GridSpec grid;
  int n = 1;
  ScaleGrid sgrid;
  std::vector<OperatorField> slices;

  std::size_t size() const { return slices.size(); }
  const OperatorField& slice(std::size_t k) const { return slices.at(k); }
};

ScaleField convolve_scales(const OperatorField& f, const ScaleMultiplier& mult, const ScaleGrid& sgrid);
ScaleField convolve_scales(const OperatorField& f, const RadialSymbol& sym, const ScaleGrid& sgrid);

/// Computes one scale slice at a time and hands it to `sink` in node order;
/// the full (s, eps) table is never held.
void stream_scales(const SpectrumField& fhat, const ScaleMultiplier& mult, const ScaleGrid& sgrid,
                   const std::function<void(std::size_t k, std::span<const cd> slice)>& sink);

/// Single-scale multiplier application.
OperatorField apply_multiplier(const SpectrumField& fhat, const ScaleMultiplier& mult, double scale);

}  // namespace opharm

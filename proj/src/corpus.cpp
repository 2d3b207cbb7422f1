#include "opharm/corpus.hpp"

#include <random>

#include "opharm/error.hpp"

namespace opharm {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::vector<LatticeVec> band_modes(int d, int M) {
  std::vector<LatticeVec> out;
  for (int a = -M; a <= M; ++a)
    for (int b = (d >= 2 ? -M : 0); b <= (d >= 2 ? M : 0); ++b)
      for (int c = (d >= 3 ? -M : 0); c <= (d >= 3 ? M : 0); ++c) out.push_back({a, b, c});
  return out;
}

OperatorField exemplar(const CorpusSpec& spec, const std::vector<int>& freqs) {
  const GridSpec grid(spec.d, spec.N);
  SpectrumField fhat(grid, spec.n);
  const Matrix id = Matrix::Identity(spec.n, spec.n);
  for (const int k : freqs) {
    if (spec.hermitian) {
      fhat.coeff({k, 0, 0}) += 0.5 * id;
      fhat.coeff({-k, 0, 0}) += 0.5 * id;
    } else {
      fhat.coeff({k, 0, 0}) += id;
    }
  }
  return fft_inverse(fhat);
}

OperatorField gaussian(const CorpusSpec& spec, std::uint64_t stream) {
  const GridSpec grid(spec.d, spec.N);
  std::mt19937_64 rng(stream);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  SpectrumField fhat(grid, spec.n);
  const auto modes = band_modes(spec.d, spec.bandM);
  for (const LatticeVec& m : modes) {
    RowMajorMatrix g(spec.n, spec.n);
    for (int i = 0; i < spec.n; ++i)
      for (int j = 0; j < spec.n; ++j) g(i, j) = cd{normal(rng), normal(rng)};
    fhat.coeff(m) = g;
  }
  if (spec.hermitian) {
    // fhat(-m) = fhat(m)^* makes every sample Hermitian
    SpectrumField sym(grid, spec.n);
    for (const LatticeVec& m : modes) {
      const LatticeVec neg{-m[0], -m[1], -m[2]};
      sym.coeff(m) = 0.5 * (Matrix(fhat.coeff(m)) + Matrix(fhat.coeff(neg)).adjoint());
    }
    fhat = std::move(sym);
  }
  if (spec.zero_mean) fhat.coeff({0, 0, 0}).setZero();
  return fft_inverse(fhat);
}

}  // namespace

void validate(const CorpusSpec& spec) {
  if (spec.d < 1 || spec.d > 3) throw ConfigError("d must be 1, 2 or 3");
  if (spec.N < 4 || (spec.N & (spec.N - 1)) != 0) throw ConfigError("N must be a power of two >= 4");
  if (spec.n < 1) throw ConfigError("n must be positive");
  if (spec.bandM < 1 || 2 * spec.bandM >= spec.N) throw ConfigError("bandM must satisfy 1 <= bandM < N/2");
  if (spec.size < 1) throw ConfigError("corpus size must be at least 1");
}

std::vector<CorpusItem> gen_corpus(const CorpusSpec& spec) {
  validate(spec);
  std::vector<CorpusItem> out(static_cast<std::size_t>(spec.size));
  const bool exemplars = spec.size >= 3;
  std::vector<int> lacunary;
  for (int k = 1; k <= spec.bandM; k *= 2) lacunary.push_back(k);
#pragma omp parallel for schedule(dynamic)
  for (int id = 0; id < spec.size; ++id) {
    CorpusItem& item = out[static_cast<std::size_t>(id)];
    item.id = id;
    if (exemplars && id == 0) {
      item.label = "lacunary";
      item.field = exemplar(spec, lacunary);
    } else if (exemplars && id == 1) {
      item.label = "single_mode";
      item.field = exemplar(spec, {1});
    } else {
      item.label = "gaussian";
      item.field = gaussian(spec, splitmix(spec.seed ^ splitmix(static_cast<std::uint64_t>(id))));
    }
    if (spec.scale != 1.0) item.field *= spec.scale;
    if (spec.adjoint) item.field = adjoint(item.field);
    if (spec.hermitian) item.field.mark_hermitian();
  }
  return out;
}

QTElement element_from_field(const OperatorField& f, const Theta& theta, double rel_tol) {
  if (f.n() != 1 || f.grid().d != 2 || theta.d() != 2)
    throw_shape("quantum torus elements are built from scalar 2-d fields");
  const SpectrumField fhat = fft_forward(f);
  double peak = 0.0;
  for (std::size_t slot = 0; slot < fhat.size(); ++slot) peak = std::max(peak, std::abs(fhat.at(slot)(0, 0)));
  QTElement x{theta, {}};
  for (std::size_t slot = 0; slot < fhat.size(); ++slot) {
    const cd a = fhat.at(slot)(0, 0);
    if (std::abs(a) > rel_tol * peak) x.coeffs[f.grid().frequency(slot)] = a;
  }
  return x;
}

}  // namespace opharm

#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "json.hpp"

#include "opharm/grid.hpp"
#include "opharm/matrix.hpp"

namespace opharm {

/// Matrix-valued function sampled on the lattice of the d-torus.
///
/// Storage is row-major over the lattice index, then an n x n row-major block
/// per point, which is also the serialized layout.
class OperatorField {
 public:
  OperatorField() = default;
  OperatorField(const GridSpec& grid, int n);
  /// Takes ownership of raw values; verifies the Hermitian flag when set.
  OperatorField(const GridSpec& grid, int n, std::vector<cd> values, bool hermitian = false);

  static OperatorField constant(const GridSpec& grid, const Matrix& a);
  /// e^{2 pi i m.s} a.
  static OperatorField single_mode(const GridSpec& grid, const LatticeVec& m, const Matrix& a);

  const GridSpec& grid() const { return grid_; }
  int n() const { return n_; }
  bool hermitian() const { return hermitian_; }
  std::size_t size() const { return grid_.num_points(); }
  std::size_t block() const { return static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_); }

  MatrixMap at(std::size_t p) { return {values_.data() + p * block(), n_, n_}; }
  ConstMatrixMap at(std::size_t p) const { return {values_.data() + p * block(), n_, n_}; }
  Matrix value(std::size_t p) const { return at(p); }

  std::span<cd> raw() { return values_; }
  std::span<const cd> raw() const { return values_; }

  /// Re-checks Hermitian symmetry at every point and sets the flag accordingly.
  bool mark_hermitian(double tol = kHermitianTol);

  OperatorField& operator*=(cd lambda);
  OperatorField& operator+=(const OperatorField& o);
  OperatorField& operator-=(const OperatorField& o);

 private:
  GridSpec grid_{};
  int n_ = 0;
  bool hermitian_ = false;
  std::vector<cd> values_;
};

OperatorField operator*(cd lambda, OperatorField f);
OperatorField operator+(OperatorField a, const OperatorField& b);
OperatorField operator-(OperatorField a, const OperatorField& b);

/// Pointwise adjoint f*(s) = f(s)^*.
OperatorField adjoint(const OperatorField& f);

/// Lattice Fourier coefficients fhat(m), m in {-N/2, ..., N/2-1}^d, stored in
/// FFT order with the same per-point layout as OperatorField.
class SpectrumField {
 public:
  SpectrumField() = default;
  SpectrumField(const GridSpec& grid, int n);

  const GridSpec& grid() const { return grid_; }
  int n() const { return n_; }
  std::size_t size() const { return grid_.num_points(); }
  std::size_t block() const { return static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_); }

  MatrixMap coeff(const LatticeVec& m) { return at(grid_.frequency_slot(m)); }
  ConstMatrixMap coeff(const LatticeVec& m) const { return at(grid_.frequency_slot(m)); }
  MatrixMap at(std::size_t slot) { return {values_.data() + slot * block(), n_, n_}; }
  ConstMatrixMap at(std::size_t slot) const { return {values_.data() + slot * block(), n_, n_}; }

  std::span<cd> raw() { return values_; }
  std::span<const cd> raw() const { return values_; }

  /// Largest ||m||_inf whose coefficient exceeds rel_tol * max coefficient norm;
  /// -1 for the zero spectrum.
  int band(double rel_tol = 1e-12) const;

 private:
  GridSpec grid_{};
  int n_ = 0;
  std::vector<cd> values_;
};

/// fhat(m) = h^d sum_s f(s) e^{-2 pi i m.s}.
SpectrumField fft_forward(const OperatorField& f);
/// f(s) = sum_m fhat(m) e^{2 pi i m.s}.
OperatorField fft_inverse(const SpectrumField& fhat);

/// The zero Fourier coefficient, i.e. the lattice mean.
Matrix field_mean(const OperatorField& f);

/// h^d sum_s g(s)^* f(s).
Matrix plancherel_pairing(const OperatorField& f, const OperatorField& g);
/// sum_m ghat(m)^* fhat(m).
Matrix spectral_pairing(const SpectrumField& fhat, const SpectrumField& ghat);

/// (h^d sum_s tr|f(s)|^p)^{1/p}; p = kInf gives sup_s ||f(s)||.
double lp_field_norm(const OperatorField& f, double p);

/// Serialization.
nlohmann::json field_to_json(const OperatorField& f);
OperatorField field_from_json(const nlohmann::json& j);
void write_field_binary(const OperatorField& f, const std::filesystem::path& path);
OperatorField read_field_binary(const std::filesystem::path& path);

}  // namespace opharm

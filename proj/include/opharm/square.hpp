#pragma once

#include <span>
#include <string>
#include <vector>

#include "opharm/kernels.hpp"
#include "opharm/scale_field.hpp"

namespace opharm {

enum class SquareKind { radial, conic, radial_discrete, conic_discrete };

const char* to_string(SquareKind kind);

/// Cone {|t| < aperture * eps}, eps <= eps_max.
struct ConeSpec {
  double aperture = 1.0;
  double eps_max = 1.0;
  BallRule rule = BallRule::cell_overlap;

  /// Aperture 2, the torus Stoltz-domain convention.
  static ConeSpec stoltz() { return {2.0, 1.0, BallRule::cell_overlap}; }
};

/// Streams scale slices into the (unrooted) sum of squares of one square
/// function. Conic sums are accumulated on the Fourier side and transformed
/// back once in finish().
class SquareAccumulator {
 public:
  SquareAccumulator(const GridSpec& grid, int n, SquareKind kind, const ConeSpec& cone = {});

  void add(double eps, double weight, std::span<const cd> slice);
  /// Pointwise sum of squares.
  std::vector<cd> squares() const;
  /// Pointwise PSD square root of squares().
  OperatorField finish() const;

 private:
  GridSpec grid_;
  int n_;
  SquareKind kind_;
  ConeSpec cone_;
  std::vector<cd> acc_;       // spatial sum (radial kinds)
  std::vector<cd> spectral_;  // Fourier-side sum (conic kinds)
  std::vector<cd> scratch_;
};

/// Square function of a precomputed ScaleField.
OperatorField square_fn(const ScaleField& sf, SquareKind kind, const ConeSpec& cone = {});
/// Streaming evaluation without materializing the ScaleField.
OperatorField square_fn(const OperatorField& f, const ScaleMultiplier& mult, const ScaleGrid& sgrid, SquareKind kind,
                        const ConeSpec& cone = {});
/// Same, returning the unrooted squares.
std::vector<cd> square_fn_squares(const OperatorField& f, const ScaleMultiplier& mult, const ScaleGrid& sgrid,
                                  SquareKind kind, const ConeSpec& cone = {});

enum class TruncatedVariant { S, Sbar, Sdyadic };

/// Squares of a truncated conic square function: entry (idx, s) is an n x n
/// PSD block. For S and Sbar idx runs over scale nodes eps_i; for Sdyadic over
/// levels j = 0..log2 N.
struct TruncatedProfile {
  TruncatedVariant variant = TruncatedVariant::S;
  GridSpec grid;
  int n = 1;
  std::vector<double> params;  // eps_i, or j as double
  std::vector<std::vector<cd>> squares;

  Matrix square(std::size_t idx, std::size_t s) const;
};

TruncatedProfile truncated_conic(const ScaleField& sf, TruncatedVariant variant, const ConeSpec& cone = {});

/// Index of the first node of `sgrid` at or above sqrt(d) 2^-j (size() if none).
std::size_t dyadic_start_node(const ScaleGrid& sgrid, int d, int j);

struct DominationReport {
  std::vector<double> constants;  // per lattice point
  double max_constant = 0.0;
  std::size_t worst_point = 0;
};

/// Smallest C(s) with s_Phi(f)(s)^2 <= C(s) sum_{|alpha|_1 <= d} S_{D^alpha Phi}(f)(s)^2.
DominationReport radial_conic_domination_check(const OperatorField& f, const RadialSymbol& sym,
                                               const ScaleGrid& sgrid, const ConeSpec& cone = {});

struct DerivIdentityReport {
  int k = 1;
  std::vector<double> eps;
  std::vector<double> discrepancy;  // per eps
  double max_discrepancy = 0.0;
};

/// Compares f * I^k(P)_eps with (-1/(2 pi))^k eps^k d^k/d eps^k P_eps(f), the
/// latter by central differences with step eps * 1e-3.
DerivIdentityReport poisson_deriv_identity_check(const OperatorField& f, int k, std::span<const double> eps_list);

}  // namespace opharm

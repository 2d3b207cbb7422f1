#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "opharm/field.hpp"
#include "opharm/hardy.hpp"

namespace opharm {

/// One entry theta_kj (k > j) of the deformation matrix. Rational entries keep
/// p/q so that phases are reduced exactly mod 1.
struct ThetaEntry {
  long p = 0;
  long q = 1;
  double value = 0.0;
  bool rational = true;
};

/// Real skew-symmetric d x d matrix, d <= 3, stored by its strictly lower part.
class Theta {
 public:
  explicit Theta(int d = 2);
  /// d = 2 with theta_21 = p/q (reduced on construction).
  static Theta rational2(long p, long q);
  static Theta zero(int d) { return Theta(d); }

  int d() const { return d_; }
  /// theta_kj for any k, j (skew symmetric, zero diagonal).
  double value(int k, int j) const;
  const ThetaEntry& entry(int k, int j) const;  // requires k > j
  void set_rational(int k, int j, long p, long q);
  void set_real(int k, int j, double v);
  bool all_rational() const;

  /// Fractional part of sum_{k>j} theta_kj a_k b_j, exact for rational entries.
  double phase(const LatticeVec& a, const LatticeVec& b) const;

  bool operator==(const Theta& o) const;

 private:
  int d_;
  std::vector<ThetaEntry> lower_;  // (k, j), k > j, row-major
  std::size_t slot(int k, int j) const { return static_cast<std::size_t>(k * (k - 1) / 2 + j); }
};

/// Finitely supported x = sum_m alpha_m U^m, U^m = U_1^{m_1} ... U_d^{m_d}.
struct QTElement {
  Theta theta;
  std::map<LatticeVec, cd> coeffs;

  static QTElement unit(const Theta& theta);
  static QTElement monomial(const Theta& theta, const LatticeVec& m, cd alpha = 1.0);

  cd coeff(const LatticeVec& m) const;
  /// Drops coefficients with |alpha| <= tol.
  QTElement& prune(double tol = 0.0);
  /// Largest ||m||_inf in the support, -1 for zero.
  int band() const;
};

QTElement operator+(const QTElement& x, const QTElement& y);
QTElement operator-(const QTElement& x, const QTElement& y);
QTElement operator*(cd lambda, const QTElement& x);

/// U^m U^n = lambda(m, n) U^{m+n}, lambda = e^{2 pi i sum_{k>j} theta_kj m_k n_j}.
cd qt_reorder_phase(const Theta& theta, const LatticeVec& m, const LatticeVec& n);
/// (U^m)^* = a(m) U^{-m}, a(m) = e^{2 pi i sum_{k>j} theta_kj m_k m_j}.
cd qt_adjoint_phase(const Theta& theta, const LatticeVec& m);

QTElement qt_mul(const QTElement& x, const QTElement& y);
QTElement qt_adjoint(const QTElement& x);
/// Normalized trace tau(x) = alpha_0.
cd qt_trace(const QTElement& x);
/// tau((U^m)^* x).
cd qt_fourier(const QTElement& x, const LatticeVec& m);

/// P_r: alpha_m -> r^{|m|} alpha_m, |m| Euclidean.
QTElement qt_poisson(const QTElement& x, double r);
/// d/dr P_r: alpha_m -> |m| r^{|m|-1} alpha_m.
QTElement qt_poisson_derivative(const QTElement& x, double r);
/// Phi~_eps: alpha_m -> mult(eps, m) alpha_m.
QTElement qt_apply_multiplier(const QTElement& x, const ScaleMultiplier& mult, double eps);

/// Clock and shift unitaries for d = 2, theta_21 = p/q: U2 U1 = omega U1 U2.
struct ClockShiftRep {
  long p = 0;
  long q = 1;
  Matrix U1;
  Matrix U2;

  /// rep(U^m) = U1^{m1} U2^{m2}, built entrywise with exact phases.
  Matrix monomial(const LatticeVec& m) const;
  Matrix operator()(const QTElement& x) const;
  /// max(||U2 U1 - omega U1 U2||, unitarity defects).
  double commutation_residual() const;
};

ClockShiftRep clock_shift_rep(const Theta& theta);

/// x~(z) = sum_m alpha_m z^m rep(U^m) sampled on the lattice; n = q.
OperatorField qt_transfer(const QTElement& x, const GridSpec& grid, const ClockShiftRep& rep);

/// E(F): Fourier mode k of F projected onto span rep(U^k),
/// i.e. tr(rep(U^k)^* Fhat(k)) / q times rep(U^k).
OperatorField qt_cond_expectation(const OperatorField& F, const ClockShiftRep& rep);

/// lp_field_norm of the transferred field (unnormalized matrix trace).
double qt_lp_norm(const QTElement& x, double p, const GridSpec& grid, const ClockShiftRep& rep);

enum class TraceConvention { unnormalized, normalized };

const char* to_string(TraceConvention c);

struct QTHardyOptions {
  HardyConfig hardy;
  TraceConvention trace = TraceConvention::unnormalized;  // normalized scales the L_p part by q^{-1/p}
};

/// |alpha_0| + ||s(x)||_p with the square function computed on the transferred
/// field. Supported methods: poisson_radial, poisson_radial_circular,
/// phi_radial, phi_radial_discrete, and the conic ones (Lusin analogue).
double qt_hardy_norm(const QTElement& x, double p, HardyMethod method, const GridSpec& grid,
                     const ClockShiftRep& rep, const QTHardyOptions& opts = {});

nlohmann::json qt_to_json(const QTElement& x);
QTElement qt_from_json(const nlohmann::json& j);

}  // namespace opharm

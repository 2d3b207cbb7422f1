#include "opharm/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "opharm/error.hpp"

namespace opharm {

namespace {

double max_abs(const Matrix& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

Matrix hermitian_part(const Matrix& a) { return 0.5 * (a + a.adjoint()); }

}  // namespace

Eigen::VectorXd singular_values(const Matrix& a) {
  if (a.rows() == 1 && a.cols() == 1) {
    Eigen::VectorXd s(1);
    s(0) = std::abs(a(0, 0));
    return s;
  }
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues();
}

double op_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  return singular_values(a).maxCoeff();
}

bool is_hermitian(const Matrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return max_abs(a - a.adjoint()) <= tol * (1.0 + max_abs(a));
}

Matrix abs_square(const Matrix& a) { return a.adjoint() * a; }

double min_eigenvalue(const Matrix& a) {
  if (!is_hermitian(a)) throw_domain("min_eigenvalue needs a Hermitian matrix");
  if (a.rows() == 1) return a(0, 0).real();
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(a), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

Matrix psd_sqrt(const Matrix& a, double reference_norm) {
  if (!is_hermitian(a)) throw_domain("psd_sqrt needs a Hermitian matrix");
  const auto n = a.rows();
  if (n == 1) {
    const double v = a(0, 0).real();
    if (v < -kNotPsdTol * reference_norm) throw NotPsdError("psd_sqrt: negative eigenvalue");
    Matrix b(1, 1);
    b(0, 0) = std::sqrt(std::max(v, 0.0));
    return b;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(a));
  const Eigen::VectorXd& lam = es.eigenvalues();
  Eigen::VectorXd root(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (lam(i) < -kNotPsdTol * reference_norm) throw NotPsdError("psd_sqrt: negative eigenvalue");
    root(i) = std::sqrt(std::max(lam(i), 0.0));
  }
  const Matrix& v = es.eigenvectors();
  return v * root.cast<cd>().asDiagonal() * v.adjoint();
}

Matrix psd_sqrt(const Matrix& a) {
  if (!is_hermitian(a)) throw_domain("psd_sqrt needs a Hermitian matrix");
  return psd_sqrt(a, op_norm(hermitian_part(a)));
}

double schatten_power_sum(const Matrix& a, double p) {
  if (!(p >= 1.0) || std::isinf(p)) throw_domain("schatten_power_sum needs finite p >= 1");
  if (p == 2.0) return a.squaredNorm();
  const Eigen::VectorXd s = singular_values(a);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) acc += std::pow(s(i), p);
  return acc;
}

double schatten_norm(const Matrix& a, double p) {
  if (!(p >= 1.0)) throw_domain("schatten_norm needs p >= 1");
  if (std::isinf(p)) return op_norm(a);
  if (p == 2.0) return a.norm();
  return std::pow(schatten_power_sum(a, p), 1.0 / p);
}

bool psd_leq(const Matrix& a, const Matrix& b, double tol) {
  if (!is_hermitian(a) || !is_hermitian(b)) throw_domain("psd_leq needs Hermitian arguments");
  if (a.rows() != b.rows()) throw_shape("psd_leq size mismatch");
  return min_eigenvalue(b - a) >= -tol * (1.0 + op_norm(b));
}

double domination_constant(const Matrix& a, const Matrix& b) {
  const double na = op_norm(a);
  if (na == 0.0) return 0.0;
  if (a.rows() == 1) {
    const double bv = b(0, 0).real();
    return bv > 0.0 ? a(0, 0).real() / bv : kInf;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(b));
  const Eigen::VectorXd& mu = es.eigenvalues();
  const double mu_max = std::max(mu.maxCoeff(), 0.0);
  const double cut = 1e-12 * mu_max;
  std::vector<Eigen::Index> range;
  std::vector<Eigen::Index> null;
  for (Eigen::Index i = 0; i < mu.size(); ++i) (mu(i) > cut && mu(i) > 0.0 ? range : null).push_back(i);
  if (range.empty()) return kInf;
  const Matrix& v = es.eigenvectors();
  if (!null.empty()) {
    Matrix vn(v.rows(), static_cast<Eigen::Index>(null.size()));
    for (std::size_t i = 0; i < null.size(); ++i) vn.col(static_cast<Eigen::Index>(i)) = v.col(null[i]);
    if (op_norm(vn.adjoint() * a * vn) > 1e-10 * na) return kInf;
  }
  Matrix w(v.rows(), static_cast<Eigen::Index>(range.size()));
  for (std::size_t i = 0; i < range.size(); ++i) {
    const auto idx = range[i];
    w.col(static_cast<Eigen::Index>(i)) = v.col(idx) / std::sqrt(mu(idx));
  }
  const Matrix m = w.adjoint() * a * w;
  Eigen::SelfAdjointEigenSolver<Matrix> em(hermitian_part(m), Eigen::EigenvaluesOnly);
  return std::max(em.eigenvalues().maxCoeff(), 0.0);
}

}  // namespace opharm

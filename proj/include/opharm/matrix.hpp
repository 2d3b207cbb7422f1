#pragma once

#include <complex>
#include <limits>

#include <Eigen/Dense>

namespace opharm {

using cd = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RowMajorMatrix = Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatrixMap = Eigen::Map<RowMajorMatrix>;
using ConstMatrixMap = Eigen::Map<const RowMajorMatrix>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Tolerances shared by the matrix calculus.
inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kPsdClipTol = 1e-10;
inline constexpr double kNotPsdTol = 1e-8;

/// Largest singular value.
double op_norm(const Matrix& a);

Eigen::VectorXd singular_values(const Matrix& a);

/// True when a = a* entrywise within tol * (1 + max|a_ij|).
bool is_hermitian(const Matrix& a, double tol = kHermitianTol);

/// |a|^2 = a* a.
Matrix abs_square(const Matrix& a);

/// Positive square root through the Hermitian eigendecomposition. Eigenvalues
/// in [-1e-8 ||a||, 0) are clipped to zero; anything more negative throws
/// NotPsdError, and a non-Hermitian argument throws DomainError.
Matrix psd_sqrt(const Matrix& a);

/// Same, with clipping measured against an external scale (e.g. the largest
/// norm over a whole field) instead of ||a||.
Matrix psd_sqrt(const Matrix& a, double reference_norm);

/// Schatten p-norm with the unnormalized trace; p = kInf gives the operator norm.
double schatten_norm(const Matrix& a, double p);

/// Sum of sigma_i^p, i.e. tr|a|^p (p finite, >= 1).
double schatten_power_sum(const Matrix& a, double p);

/// a <= b in the PSD order: lambda_min(b - a) >= -tol * (1 + ||b||).
bool psd_leq(const Matrix& a, const Matrix& b, double tol);

/// Smallest eigenvalue of a Hermitian matrix.
double min_eigenvalue(const Matrix& a);

/// Smallest C >= 0 with a <= C b for PSD a, b. Returns 0 when a vanishes and
/// +inf when a has mass outside the range of b.
double domination_constant(const Matrix& a, const Matrix& b);

}  // namespace opharm

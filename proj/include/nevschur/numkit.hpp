#pragma once

// Dense complex-matrix kernels shared by every other module. Storage and
// products come from Eigen; the Hermitian eigensolver is a cyclic Jacobi
// iteration with fixed ordering and phase conventions so that results are
// bit-stable for identical inputs.

#include <complex>

#include <Eigen/Dense>

#include "nevschur/errors.hpp"

namespace nevschur {

using cdouble = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kDefaultRtol = 1e-10;
inline constexpr double kMaxCondition = 1e12;

/// Square matrix equal to its adjoint. Construction symmetrizes via
/// (A + A*)/2, so the stored value is exactly Hermitian.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;

  /// Throws DimensionMismatch for non-square and NonFinite for NaN/Inf input.
  explicit HermitianMatrix(const CMatrix& a);

  /// Like the constructor but also rejects inputs whose asymmetry exceeds
  /// tol * max(1, ||A||).
  static HermitianMatrix checked(const CMatrix& a, double tol = 1e-12);

  const CMatrix& matrix() const noexcept { return m_; }
  Index dim() const noexcept { return m_.rows(); }

 private:
  CMatrix m_;
};

struct EigenDecomposition {
  RVector values;   // ascending
  CMatrix vectors;  // orthonormal columns, matching `values`
};

/// Hermitian eigendecomposition by cyclic Jacobi rotations. Eigenvalues are
/// ascending; each eigenvector is scaled so that its first component of
/// largest modulus is real and nonnegative.
EigenDecomposition eigh(const HermitianMatrix& a);

/// Positive semidefinite square root. Eigenvalues down to
/// -1e-10 * max(1, ||A||) are clamped to zero; anything lower throws NotPSD.
HermitianMatrix psd_sqrt(const HermitianMatrix& a);

/// Moore-Penrose pseudoinverse. Singular values below rtol * sigma_max are
/// treated as zero. Singular values come from the Hermitian dilation
/// [[0, A], [A*, 0]] so small ones keep full relative accuracy.
CMatrix pinv(const CMatrix& a, double rtol = kDefaultRtol);

/// Isometric embedding onto the numerical range of a PSD matrix. Columns are
/// ordered by descending eigenvalue; rank counts eigenvalues above
/// rtol * (largest eigenvalue).
CMatrix range_embed(const HermitianMatrix& a, double rtol = kDefaultRtol);

/// Largest singular value.
double opnorm(const CMatrix& a);

/// Defect operator D_T = (I - T*T)^{1/2} of a contraction together with an
/// isometric embedding of its range. The rank is decided on the eigenvalues
/// of I - T*T against the absolute threshold rtol (defect operators of
/// contractions live on the unit scale).
struct Defect {
  HermitianMatrix op;
  CMatrix embedding;

  Index rank() const noexcept { return embedding.cols(); }
};

/// Throws NotContraction when I - T*T has an eigenvalue below -1e-10.
Defect defect(const CMatrix& t, double rtol = kDefaultRtol);

/// Solves A X = B with partial-pivot LU. Throws NearSingular when the
/// 1-norm condition number exceeds max_cond.
CMatrix solve(const CMatrix& a, const CMatrix& b, double max_cond = kMaxCondition);
CMatrix inverse(const CMatrix& a, double max_cond = kMaxCondition);

/// 1-norm condition number; infinity for singular input.
double condition_number(const CMatrix& a);

CMatrix identity(Index n);
bool all_finite(const CMatrix& a);
double max_abs(const CMatrix& a);

}  // namespace nevschur

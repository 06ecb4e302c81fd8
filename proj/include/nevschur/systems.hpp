#pragma once

// Passive discrete-time systems tau = {T; M, M, K} with T = [D C; B A]
// acting on M (input/output, dim m) plus K (state, dim n).

#include <optional>
#include <vector>

#include "nevschur/numkit.hpp"

namespace nevschur {

inline constexpr double kPassivityTol = 1e-10;
inline constexpr double kSymmetryTol = 1e-12;

/// A point of C \ ((-inf, -1] U [1, inf)), the common holomorphy domain.
class CutPlanePoint {
 public:
  /// Throws BranchCut for real z with |z| >= 1 and NonFinite for NaN/Inf.
  explicit CutPlanePoint(cdouble z);

  cdouble value() const noexcept { return z_; }

 private:
  cdouble z_;
};

class PassiveSystem {
 public:
  /// Checks ||T|| <= 1 + 1e-10 and, when requested, T = T* within 1e-12.
  static PassiveSystem validate(const CMatrix& t, Index m, bool require_selfadjoint);

  /// Skips the passivity and symmetry checks. Only for building deliberate
  /// violators (certificates must then report a failure).
  static PassiveSystem unchecked(const CMatrix& t, Index m, bool selfadjoint);

  Index dim_input() const noexcept { return m_; }
  Index dim_state() const noexcept { return t_.rows() - m_; }
  bool selfadjoint() const noexcept { return selfadjoint_; }
  const CMatrix& matrix() const noexcept { return t_; }

  CMatrix D() const { return t_.topLeftCorner(m_, m_); }
  CMatrix C() const { return t_.topRightCorner(m_, dim_state()); }
  CMatrix B() const { return t_.bottomLeftCorner(dim_state(), m_); }
  CMatrix A() const { return t_.bottomRightCorner(dim_state(), dim_state()); }

 private:
  PassiveSystem(CMatrix t, Index m, bool selfadjoint)
      : t_(std::move(t)), m_(m), selfadjoint_(selfadjoint) {}

  CMatrix t_;
  Index m_ = 0;
  bool selfadjoint_ = false;
};

/// Assembles [D C; B A] from blocks.
CMatrix block_matrix(const CMatrix& d, const CMatrix& c, const CMatrix& b, const CMatrix& a);

/// Throws NotSelfadjoint unless the system carries the selfadjoint flag.
void require_selfadjoint(const PassiveSystem& sys, const char* operation);

/// Omega(z) = D + z C (I - zA)^{-1} B. Throws NearSingular when the
/// condition number of I - zA exceeds 1e12.
CMatrix transfer(const PassiveSystem& sys, CutPlanePoint z);

/// Omega'(z) = C (I - zA)^{-2} B.
CMatrix transfer_derivative(const PassiveSystem& sys, CutPlanePoint z);

/// M(xi) = P_M (T - xi)^{-1} restricted to M, for a Hermitian contraction T
/// whose leading m coordinates span M. Rejects xi in [-1, 1].
CMatrix compressed_resolvent(const HermitianMatrix& t, Index m, cdouble xi);

/// P_M (I - zT)^{-1} restricted to M, the left side of the Schur-Frobenius
/// identity for the transfer function.
CMatrix compressed_inverse_resolvent(const CMatrix& t, Index m, CutPlanePoint z);

struct KrylovReport {
  Index controllable_dim = 0;
  Index observable_dim = 0;
  bool minimal = false;
  bool simple = false;
  /// Some accepted or rejected Krylov direction fell within 10x of the cutoff.
  bool near_tolerance = false;
};

/// Orthonormal basis of span{A^k S : k >= 0} built by block Arnoldi with
/// double Gram-Schmidt. Each new block is compressed through the eigenvectors
/// of its Gram matrix, keeping eigenvalues above rtol * scale^2 where scale is
/// ||S|| for the first block and ||A|| afterwards. The procedure only uses
/// inner products, so Q(UAU*, US) = U Q(A, S) for unitary U.
struct KrylovBasis {
  CMatrix basis;
  bool near_tolerance = false;
};
KrylovBasis krylov_basis(const CMatrix& a, const CMatrix& start, double rtol = kDefaultRtol);

KrylovReport krylov_analysis(const PassiveSystem& sys, double rtol = kDefaultRtol);

struct Trajectory {
  std::vector<CVector> states;   // h_0 .. h_K
  std::vector<CVector> outputs;  // sigma_0 .. sigma_{K-1}
  std::vector<CVector> inputs;   // xi_0 .. xi_{K-1}
  /// ||h_k||^2 + ||xi_k||^2 - ||h_{k+1}||^2 - ||sigma_k||^2 per step.
  std::vector<double> energy_defect;

  double min_energy_defect() const;
};

/// Runs h_{k+1} = A h_k + B xi_k, sigma_k = C h_k + D xi_k.
Trajectory simulate(const PassiveSystem& sys, const CVector& h0, const std::vector<CVector>& inputs);

/// For minimal selfadjoint systems with matching transfer functions on the
/// similarity probe grid (within rtol), returns the unitary U with
/// A2 = U A1 U*, B2 = U B1, C2 = C1 U*, D2 = D1 (each within 1e-8), built from
/// matched Krylov bases. Returns nullopt when the transfers differ or the
/// recovered U fails verification. Throws NonMinimal for non-minimal input.
std::optional<CMatrix> unitary_similarity(const PassiveSystem& sys1, const PassiveSystem& sys2,
                                          double rtol = 1e-8);

}  // namespace nevschur

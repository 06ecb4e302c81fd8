#pragma once

// Analytics for transfer functions of passive selfadjoint systems: sampled
// class certificates, boundary limits, the Moebius representation, inner
// detection and the bridge to compressed resolvents.

#include <array>
#include <optional>
#include <vector>

#include "nevschur/blocks.hpp"
#include "nevschur/systems.hpp"

namespace nevschur {

/// Delta_F(z) = (zI - F)(I - zF)^{-1} on ran D_F (range coordinates).
CMatrix characteristic_fn(const HermitianMatrix& f, CutPlanePoint z, double rtol = kDefaultRtol);

/// K(z, w) = I - Omega(w)* Omega(z) - ((1 - conj(w) z) / (z - conj(w))) (Omega(z) - Omega(w)*).
/// Throws InvalidArgument when z = conj(w).
CMatrix pick_kernel(const PassiveSystem& sys, CutPlanePoint z, CutPlanePoint w);

struct CertificateGrid {
  std::vector<cdouble> upper;
  std::vector<cdouble> lower;
  std::vector<cdouble> disk;

  static CertificateGrid standard();
};

struct RSCertificate {
  CertificateGrid grid;
  double min_kernel_eig = 0.0;
  double min_inequality_eig = 0.0;
  double schur_norm_max = 0.0;
  double tol_psd = 0.0;
  double tol_norm = 1e-9;
  bool pass = false;
};

/// Never throws on a failing sample; the verdict is data.
RSCertificate certify_rs(const PassiveSystem& sys,
                         const CertificateGrid& grid = CertificateGrid::standard());

struct LimitValues {
  CMatrix minus;  // Omega(-1)
  CMatrix plus;   // Omega(1)
};

/// Omega(-1) = -K K* + D_{K*} Y D_{K*}, Omega(1) = K K* + D_{K*} Y D_{K*}.
LimitValues limit_values(const KYParam& p);

struct MoebiusRep {
  CMatrix omega0;
  /// Isometry onto ran D_{Omega(0)} and D_{Omega(0)} in those coordinates.
  CMatrix defect_embedding;
  CMatrix defect_onto;  // E* D_{Omega(0)}
  /// Realizes Lambda(z) = z N* (I - z F_hat)^{-1} N; empty when D_{Omega(0)} = 0.
  std::optional<PassiveSystem> lambda_system;
  double reconstruction_residual = 0.0;
  double pinv_crosscheck_residual = 0.0;

  CMatrix lambda(CutPlanePoint z) const;
  /// Omega(0) + D Lambda (I + Omega(0) Lambda)^{-1} D.
  CMatrix reconstruct(CutPlanePoint z) const;
};

/// Throws IllConditioned when reconstruction on the disk grid misses by > 1e-8.
MoebiusRep moebius_rep(const PassiveSystem& sys);

/// Lambda(z) through the Moore-Penrose formula on ran D_{Omega(0)}.
CMatrix lambda_via_pinv(const PassiveSystem& sys, const MoebiusRep& rep, CutPlanePoint z);

struct InnerReport {
  bool is_inner = false;
  double fit_residual = 0.0;
  std::optional<CMatrix> d_fit;
  /// (i) Omega(+-1)^2 = I, (ii) the two limit identities, (iii) K partial
  /// isometry with Y^2 = I.
  std::array<bool, 3> neuvaa{};
  /// (Omega(a) - a)(I - a Omega(a))^{-1} = Omega(0) at a = 1/2.
  bool thinne_at_a = false;
  bool unitary_at_probe = false;  // Omega(e^{i pi/3}) unitary within 1e-8
  bool commuting = false;         // Omega(z1) Omega(z2) = Omega(z2) Omega(z1) on probes
  bool normal = false;            // Omega(z) normal on probes
};

/// Throws NonMinimal when the system is not minimal.
InnerReport inner_test(const PassiveSystem& sys);

/// (z I + D)(I + z D)^{-1}.
CMatrix inner_form(const CMatrix& d, cdouble z);

/// M(xi) = P_M (T - xi)^{-1} restricted to M.
class NFunction {
 public:
  /// Throws NotContraction when ||T|| > 1 + 1e-10.
  NFunction(const HermitianMatrix& t, Index m);

  const HermitianMatrix& backing() const noexcept { return t_; }
  Index dim() const noexcept { return m_; }
  CMatrix operator()(cdouble xi) const;

 private:
  HermitianMatrix t_;
  Index m_;
};

NFunction to_nfunction(const PassiveSystem& sys);
/// The system whose transfer function is U^{-1}(M): the same backing T.
PassiveSystem from_nfunction(const NFunction& nf);

/// U(Omega)(xi) = (Omega(1/xi) - xi)^{-1}.
CMatrix u_eval(const PassiveSystem& sys, cdouble xi);
/// U^{-1}(M)(z) = M(1/z)^{-1} + 1/z, and the D block at z = 0.
CMatrix u_inverse_eval(const NFunction& nf, CutPlanePoint z);

/// Gamma(M)(xi) = M(xi)^{-1} / (xi^2 - 1).
CMatrix gamma_transform(const NFunction& nf, cdouble xi);
CMatrix gamma_value(const CMatrix& m_xi, cdouble xi);
/// Gamma(M) as the compressed resolvent of T_Phi.
NFunction gamma_realize(const NFunction& nf);

}  // namespace nevschur

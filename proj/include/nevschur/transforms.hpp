#pragma once

// Transforms of transfer functions with explicit realizations, the fixed
// points Omega_0 / M_0 and their Jacobi-matrix realization, bi-inner
// dilations and spectral measures.

#include <vector>

#include "nevschur/rsclass.hpp"
#include "nevschur/systems.hpp"

namespace nevschur {

/// w_a(z) = (z + a) / (1 + a z).
cdouble moebius_point(cdouble z, double a);

/// Upsilon(z) = (zI - Omega(z))(I - z Omega(z))^{-1}.
CMatrix phi_eval(const PassiveSystem& sys, CutPlanePoint z);

/// T_Phi = [-P_M T|_M, P_M D_T; D_T|_M, T] on M (+) ran D_T.
PassiveSystem phi_realize(const PassiveSystem& sys, double rtol = kDefaultRtol);

/// Realization of Omega(w_a(z)): [Omega(a), s C (I-aF)^{-1}; s (I-aF)^{-1} C*, F_a]
/// with s = sqrt(1 - a^2) and F_a = (F - a)(I - aF)^{-1}.
PassiveSystem xi_realize(const PassiveSystem& sys, double a);

/// T_a = (T - a)(I - aT)^{-1} as a system with the same split.
PassiveSystem operator_moebius(const PassiveSystem& sys, double a);
/// The same operator assembled block by block from Omega(a), C, F.
CMatrix operator_moebius_blocks(const PassiveSystem& sys, double a);

/// Selfadjoint coupler K = [K11 K12; K12* K22] on M (+) H.
class RedhefferCoupler {
 public:
  /// Throws NotContraction when ||K|| > 1 + 1e-10.
  RedhefferCoupler(const CMatrix& k11, const CMatrix& k12, const CMatrix& k22);
  static RedhefferCoupler from_matrix(const CMatrix& k, Index m);
  /// K_a = [a, s; s, -a] (x) I_m.
  static RedhefferCoupler k_a(double a, Index m);

  const CMatrix& k11() const noexcept { return k11_; }
  const CMatrix& k12() const noexcept { return k12_; }
  const CMatrix& k22() const noexcept { return k22_; }
  CMatrix matrix() const;
  Index dim_outer() const noexcept { return k11_.rows(); }
  Index dim_inner() const noexcept { return k22_.rows(); }
  bool strict() const;  // ||K22|| < 1

 private:
  CMatrix k11_, k12_, k22_;
};

/// K * S. Throws InfeasibleCoupler unless ||K22|| < 1 or Omega_S(0) = 0
/// within 1e-10.
PassiveSystem redheffer(const RedhefferCoupler& k, const PassiveSystem& sys);
/// Theta(z) = K11 + K12 Omega(z)(I - K22 Omega(z))^{-1} K12*.
CMatrix redheffer_transfer(const RedhefferCoupler& k, const PassiveSystem& sys, CutPlanePoint z);

/// Realization of (aI + Omega)(I + a Omega)^{-1}.
PassiveSystem pi_a_realize(const PassiveSystem& sys, double a);
/// Realization of (Omega - aI)(I - a Omega)^{-1}: operator_moebius(xi_realize(sys, -a), a).
PassiveSystem zeta_realize(const PassiveSystem& sys, double a);

/// Omega_0(z) = z I / (1 + sqrt(1 - z^2)), principal branch.
CMatrix omega0_eval(CutPlanePoint z, Index m);
cdouble omega0_scalar(CutPlanePoint z);
/// M_0(xi) = -I / (xi sqrt(1 - 1/xi^2)); rejects xi in [-1, 1].
CMatrix m0_eval(cdouble xi, Index m);
cdouble m0_scalar(cdouble xi);

/// Block Jacobi truncation with N state blocks of size m: first coupling
/// 1/sqrt(2), the rest 1/2, zero diagonal.
PassiveSystem jacobi_system(Index n_blocks, Index m);
/// Omega_N(z) - Omega_0(z) for the scalar truncation, computed without
/// cancellation from the rank-one tail correction.
cdouble jacobi_error(Index n_blocks, CutPlanePoint z);

/// Inner system with Omega(z) = (z + D)(1 + zD)^{-1}: T = [D, D_D; D_D, -D]
/// on M (+) ran D_D.
PassiveSystem inner_system(const HermitianMatrix& d, double rtol = kDefaultRtol);

struct InnerDilation {
  Index dim_ambient = 0;
  Index dim_input = 0;
  HermitianMatrix a_tilde;
  CMatrix embedding;  // first dim_input coordinates
  double reconstruction_residual = 0.0;
  bool m_simple = false;

  /// P_M (zI + A~)(I + zA~)^{-1} restricted to M.
  CMatrix eval(CutPlanePoint z) const;
};

/// A~ = -T_Phi. Throws NonMinimal for non-minimal input.
InnerDilation inner_dilate(const PassiveSystem& sys);

struct SpectralAtom {
  double t = 0.0;
  CMatrix weight;
};

struct SpectralMeasure {
  std::vector<SpectralAtom> atoms;  // ascending in t

  CMatrix total() const;
  /// sum_j ((z + t_j)/(1 + z t_j)) weight_j.
  CMatrix eval(CutPlanePoint z) const;
};

inline constexpr double kAtomMergeTol = 1e-10;
SpectralMeasure spectral_measure(const InnerDilation& dil);

struct FixedPointReport {
  bool xi_fixed = false;
  bool infix_fixed = false;
  bool cjdcyjd_fixed = false;
  bool constant = false;             // Omega constant on the probe grid
  bool fundamental_symmetry = false;  // constant with Omega(0)^2 = I
};

/// Grid-relative tests of the three functional equations at the given a.
/// Throws InvalidArgument for a = 0 or |a| >= 1.
FixedPointReport fixed_point_tests(const PassiveSystem& sys, double a);

}  // namespace nevschur

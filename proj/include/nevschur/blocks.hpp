#pragma once

// Contractive 2x2 block operators: free-parameter assembly and the two
// parametrizations (F, K, Y) and (D, N, X) of a selfadjoint contraction.
// Defect spaces are carried as isometric range embeddings, so K, Y, N, X,
// G, L live at their intrinsic dimensions.

#include "nevschur/numkit.hpp"
#include "nevschur/systems.hpp"

namespace nevschur {

inline constexpr double kParamNormTol = 1e-10;
inline constexpr double kReassemblyTol = 1e-8;

/// Defect data of a contraction with the pseudoinverse of D_T restricted to
/// the kept range, so inversion and rank truncation agree.
struct DefectRange {
  CMatrix op;         // D_T, ambient
  CMatrix embedding;  // isometry onto ran D_T
  CMatrix op_pinv;    // E (E* D_T E)^{-1} E*

  Index ambient_dim() const noexcept { return op.rows(); }
  Index rank() const noexcept { return embedding.cols(); }
  /// E* D_T: maps the ambient space onto the intrinsic defect coordinates.
  CMatrix onto() const { return embedding.adjoint() * op; }
};

DefectRange defect_range(const CMatrix& t, double rtol = kDefaultRtol);

/// T = [D, D_{D*} G; N D_D, -N D* G + D_{N*} L D_G] from
/// D : M -> N, N : D_D -> L, G : K -> D_{D*}, L : D_G -> D_{N*}.
class GeneralBlockParam {
 public:
  /// Throws NotContraction when a parameter norm exceeds 1 + 1e-10 and
  /// DimensionMismatch when N, G, L do not fit the defect ranks.
  static GeneralBlockParam make(const CMatrix& d, const CMatrix& n_int, const CMatrix& g_int,
                                const CMatrix& l_int, double rtol = kDefaultRtol);

  const CMatrix& D() const noexcept { return d_; }
  const CMatrix& N() const noexcept { return n_int_; }
  const CMatrix& G() const noexcept { return g_int_; }
  const CMatrix& L() const noexcept { return l_int_; }

  /// Ambient forms: N E_D*, E_{D*} G, E_{N*} L E_G*.
  CMatrix n_ambient() const { return n_int_ * dd_.embedding.adjoint(); }
  CMatrix g_ambient() const { return dds_.embedding * g_int_; }
  CMatrix l_ambient() const { return dns_.embedding * l_int_ * dg_.embedding.adjoint(); }

  const DefectRange& defect_d() const noexcept { return dd_; }
  const DefectRange& defect_d_star() const noexcept { return dds_; }
  const DefectRange& defect_n_star() const noexcept { return dns_; }
  const DefectRange& defect_g() const noexcept { return dg_; }

  Index dim_in_top() const noexcept { return d_.cols(); }      // M
  Index dim_out_top() const noexcept { return d_.rows(); }     // N
  Index dim_in_bottom() const noexcept { return g_int_.cols(); }  // K
  Index dim_out_bottom() const noexcept { return n_int_.rows(); }  // L

 private:
  CMatrix d_, n_int_, g_int_, l_int_;
  DefectRange dd_, dds_, dns_, dg_;
};

CMatrix assemble_contraction(const GeneralBlockParam& p);

/// Recovers (D, N, G, L) from a contraction T split after m_top rows and
/// m_left columns. Throws IllConditioned when reassembly misses by > 1e-8.
GeneralBlockParam extract_general(const CMatrix& t, Index rows_top, Index cols_left,
                                  double rtol = kDefaultRtol);

/// |(||(f,h)||^2 - ||T(f,h)||^2) - (||D_N(D_D f - D* G h) - N* L D_G h||^2 +
/// ||D_L D_G h||^2)| divided by max(1, ||(f,h)||^2).
double defect_identity_residual(const GeneralBlockParam& p, const CVector& f, const CVector& h);

/// (F, K, Y) with D = -K F K* + D_{K*} Y D_{K*}, C = K D_F.
class KYParam {
 public:
  /// K : D_F -> M in intrinsic coordinates (m x rank D_F); Y Hermitian on
  /// D_{K*} (rank D_{K*} square).
  static KYParam make(const CMatrix& f, const CMatrix& k_int, const CMatrix& y_int,
                      double rtol = kDefaultRtol);

  const HermitianMatrix& F() const noexcept { return f_; }
  const CMatrix& K() const noexcept { return k_int_; }
  const HermitianMatrix& Y() const noexcept { return y_int_; }
  const DefectRange& defect_f() const noexcept { return df_; }
  const DefectRange& defect_k_star() const noexcept { return dks_; }

  Index dim_input() const noexcept { return k_int_.rows(); }
  CMatrix k_ambient() const { return k_int_ * df_.embedding.adjoint(); }
  /// D_{K*} Y D_{K*} on M.
  CMatrix y_part() const;

 private:
  HermitianMatrix f_;
  CMatrix k_int_;
  HermitianMatrix y_int_;
  DefectRange df_, dks_;
};

/// Assembles [K 0; 0 I] J_F [K* 0; 0 I] + diag(D_{K*} Y D_{K*}, 0).
PassiveSystem assemble_selfadjoint_ky(const KYParam& p);

struct KYExtraction {
  KYParam param;
  double reassembly_residual = 0.0;
};
KYExtraction extract_ky(const PassiveSystem& sys, double rtol = kDefaultRtol);

/// (D, N, X) with C = D_D N*, F = -N D N* + D_{N*} X D_{N*}.
class NXParam {
 public:
  static NXParam make(const CMatrix& d, const CMatrix& n_int, const CMatrix& x_int,
                      double rtol = kDefaultRtol);

  const HermitianMatrix& D() const noexcept { return d_; }
  const CMatrix& N() const noexcept { return n_int_; }
  const HermitianMatrix& X() const noexcept { return x_int_; }
  const DefectRange& defect_d() const noexcept { return dd_; }
  const DefectRange& defect_n_star() const noexcept { return dns_; }

  Index dim_state() const noexcept { return n_int_.rows(); }
  /// F_hat = D_{N*} X D_{N*} on the state space.
  CMatrix f_hat() const;
  /// D restricted to D_D, in intrinsic coordinates.
  CMatrix d_intrinsic() const;

 private:
  HermitianMatrix d_;
  CMatrix n_int_;
  HermitianMatrix x_int_;
  DefectRange dd_, dns_;
};

PassiveSystem assemble_selfadjoint_nx(const NXParam& p);

struct NXExtraction {
  NXParam param;
  double reassembly_residual = 0.0;
};
NXExtraction extract_nx(const PassiveSystem& sys, double rtol = kDefaultRtol);

/// W(z) = I + z D N* (I - z F_hat)^{-1} N on D_D.
CMatrix lemma_w(const NXParam& p, CutPlanePoint z);
/// W(z)^{-1} = I - z D N* (I - z F)^{-1} N, with F the state block.
CMatrix lemma_w_inverse(const NXParam& p, CutPlanePoint z);

/// J_F = [-F, D_F; D_F, F] on D_F (+) K, with D_F in range coordinates.
CMatrix fundamental_jf(const HermitianMatrix& f, double rtol = kDefaultRtol);

}  // namespace nevschur

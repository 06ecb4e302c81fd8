#include "nevschur/blocks.hpp"

#include <algorithm>
#include <string>

namespace nevschur {

namespace {

void check_norm(const CMatrix& a, const char* name, double tol = kParamNormTol) {
  if (!all_finite(a)) throw Error(ErrorKind::NonFinite, std::string(name) + " is not finite");
  const double n = opnorm(a);
  if (n > 1.0 + tol) {
    throw Error(ErrorKind::NotContraction,
                std::string(name) + " has norm " + std::to_string(n) + " > 1");
  }
}

void check_shape(const CMatrix& a, Index rows, Index cols, const char* name) {
  if (a.rows() != rows || a.cols() != cols) {
    throw Error(ErrorKind::DimensionMismatch,
                std::string(name) + " must be " + std::to_string(rows) + "x" + std::to_string(cols) +
                    ", got " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
}

double residual(const CMatrix& a, const CMatrix& b) {
  return a.size() == 0 ? 0.0 : (a - b).cwiseAbs().maxCoeff();
}

CMatrix intrinsic_defect(const CMatrix& t) {
  if (t.cols() == 0) return CMatrix::Zero(0, 0);
  return defect(t).op.matrix();
}

}  // namespace

DefectRange defect_range(const CMatrix& t, double rtol) {
  const Defect d = defect(t, rtol);
  DefectRange out;
  out.op = d.op.matrix();
  out.embedding = d.embedding;
  const CMatrix core = d.embedding.adjoint() * out.op * d.embedding;
  out.op_pinv = d.embedding * inverse(core) * d.embedding.adjoint();
  return out;
}

GeneralBlockParam GeneralBlockParam::make(const CMatrix& d, const CMatrix& n_int,
                                          const CMatrix& g_int, const CMatrix& l_int, double rtol) {
  check_norm(d, "D");
  GeneralBlockParam p;
  p.d_ = d;
  p.dd_ = defect_range(d, rtol);
  p.dds_ = defect_range(d.adjoint(), rtol);
  if (n_int.cols() != p.dd_.rank()) {
    throw Error(ErrorKind::DimensionMismatch, "N must act on the defect range of D (rank " +
                                                  std::to_string(p.dd_.rank()) + ")");
  }
  if (g_int.rows() != p.dds_.rank()) {
    throw Error(ErrorKind::DimensionMismatch, "G must map into the defect range of D* (rank " +
                                                  std::to_string(p.dds_.rank()) + ")");
  }
  check_norm(n_int, "N");
  check_norm(g_int, "G");
  p.n_int_ = n_int;
  p.g_int_ = g_int;
  p.dns_ = defect_range(n_int.adjoint(), rtol);
  p.dg_ = defect_range(g_int, rtol);
  check_shape(l_int, p.dns_.rank(), p.dg_.rank(), "L");
  check_norm(l_int, "L");
  p.l_int_ = l_int;
  return p;
}

CMatrix assemble_contraction(const GeneralBlockParam& p) {
  const CMatrix n = p.n_ambient();
  const CMatrix g = p.g_ambient();
  const CMatrix top_right = p.defect_d_star().op * g;
  const CMatrix bottom_left = n * p.defect_d().op;
  const CMatrix bottom_right =
      -n * p.D().adjoint() * g + p.defect_n_star().op * p.l_ambient() * p.defect_g().op;
  return block_matrix(p.D(), top_right, bottom_left, bottom_right);
}

GeneralBlockParam extract_general(const CMatrix& t, Index rows_top, Index cols_left, double rtol) {
  if (rows_top < 0 || cols_left < 0 || rows_top > t.rows() || cols_left > t.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "bad block split");
  }
  const Index rb = t.rows() - rows_top;
  const Index cr = t.cols() - cols_left;
  const CMatrix d = t.topLeftCorner(rows_top, cols_left);
  const CMatrix c = t.topRightCorner(rows_top, cr);
  const CMatrix b = t.bottomLeftCorner(rb, cols_left);
  const CMatrix f = t.bottomRightCorner(rb, cr);

  const DefectRange dd = defect_range(d, rtol);
  const DefectRange dds = defect_range(d.adjoint(), rtol);
  const CMatrix g_amb = dds.op_pinv * c;
  const CMatrix n_amb = b * dd.op_pinv;
  const CMatrix g_int = dds.embedding.adjoint() * g_amb;
  const CMatrix n_int = n_amb * dd.embedding;
  const DefectRange dns = defect_range(n_int.adjoint(), rtol);
  const DefectRange dg = defect_range(g_int, rtol);
  const CMatrix l_amb = dns.op_pinv * (f + n_amb * d.adjoint() * g_amb) * dg.op_pinv;
  const CMatrix l_int = dns.embedding.adjoint() * l_amb * dg.embedding;

  GeneralBlockParam p = GeneralBlockParam::make(d, n_int, g_int, l_int, rtol);
  const double res = residual(assemble_contraction(p), t);
  if (res > kReassemblyTol) {
    throw Error(ErrorKind::IllConditioned,
                "reassembly residual " + std::to_string(res) + " exceeds tolerance");
  }
  return p;
}

double defect_identity_residual(const GeneralBlockParam& p, const CVector& f, const CVector& h) {
  if (f.size() != p.dim_in_top() || h.size() != p.dim_in_bottom()) {
    throw Error(ErrorKind::DimensionMismatch, "vector dimensions do not match the parameters");
  }
  const CMatrix t = assemble_contraction(p);
  CVector fh(f.size() + h.size());
  fh << f, h;
  const double lhs = fh.squaredNorm() - (t * fh).squaredNorm();

  const CMatrix& e_d = p.defect_d().embedding;
  const CMatrix& e_g = p.defect_g().embedding;
  const CVector dg_h = p.defect_g().op * h;
  const CVector u = e_d.adjoint() * (p.defect_d().op * f - p.D().adjoint() * (p.g_ambient() * h));
  const CVector first =
      intrinsic_defect(p.N()) * u -
      p.N().adjoint() * (p.defect_n_star().embedding * (p.L() * (e_g.adjoint() * dg_h)));
  const CVector second = intrinsic_defect(p.L()) * (e_g.adjoint() * dg_h);
  const double rhs = first.squaredNorm() + second.squaredNorm();
  return std::abs(lhs - rhs) / std::max(1.0, fh.squaredNorm());
}

KYParam KYParam::make(const CMatrix& f, const CMatrix& k_int, const CMatrix& y_int, double rtol) {
  KYParam p;
  p.f_ = HermitianMatrix::checked(f);
  check_norm(f, "F");
  p.df_ = defect_range(p.f_.matrix(), rtol);
  if (k_int.cols() != p.df_.rank()) {
    throw Error(ErrorKind::DimensionMismatch, "K must act on the defect range of F (rank " +
                                                  std::to_string(p.df_.rank()) + ")");
  }
  check_norm(k_int, "K");
  p.k_int_ = k_int;
  p.dks_ = defect_range(k_int.adjoint(), rtol);
  check_shape(y_int, p.dks_.rank(), p.dks_.rank(), "Y");
  p.y_int_ = HermitianMatrix::checked(y_int);
  check_norm(y_int, "Y");
  return p;
}

CMatrix KYParam::y_part() const {
  const CMatrix& e = dks_.embedding;
  return dks_.op * e * y_int_.matrix() * e.adjoint() * dks_.op;
}

PassiveSystem assemble_selfadjoint_ky(const KYParam& p) {
  const Index m = p.dim_input();
  const Index n = p.F().dim();
  const Index r = p.defect_f().rank();
  const CMatrix jf = fundamental_jf(p.F());
  CMatrix lift = CMatrix::Zero(m + n, r + n);
  lift.topLeftCorner(m, r) = p.K();
  lift.bottomRightCorner(n, n) = identity(n);
  CMatrix t = lift * jf * lift.adjoint();
  t.topLeftCorner(m, m) += p.y_part();
  return PassiveSystem::validate(HermitianMatrix(t).matrix(), m, true);
}

KYExtraction extract_ky(const PassiveSystem& sys, double rtol) {
  require_selfadjoint(sys, "extract_ky");
  const CMatrix f = sys.A();
  const DefectRange df = defect_range(f, rtol);
  const CMatrix k_amb = sys.C() * df.op_pinv;
  const CMatrix k_int = k_amb * df.embedding;
  const DefectRange dks = defect_range(k_int.adjoint(), rtol);
  const CMatrix y_amb = dks.op_pinv * (sys.D() + k_amb * f * k_amb.adjoint()) * dks.op_pinv;
  const CMatrix y_int = HermitianMatrix(dks.embedding.adjoint() * y_amb * dks.embedding).matrix();
  KYParam p = KYParam::make(f, k_int, y_int, rtol);
  const double res = residual(assemble_selfadjoint_ky(p).matrix(), sys.matrix());
  if (res > kReassemblyTol) {
    throw Error(ErrorKind::IllConditioned,
                "reassembly residual " + std::to_string(res) + " exceeds tolerance");
  }
  return {std::move(p), res};
}

NXParam NXParam::make(const CMatrix& d, const CMatrix& n_int, const CMatrix& x_int, double rtol) {
  NXParam p;
  p.d_ = HermitianMatrix::checked(d);
  check_norm(d, "D");
  p.dd_ = defect_range(p.d_.matrix(), rtol);
  if (n_int.cols() != p.dd_.rank()) {
    throw Error(ErrorKind::DimensionMismatch, "N must act on the defect range of D (rank " +
                                                  std::to_string(p.dd_.rank()) + ")");
  }
  check_norm(n_int, "N");
  p.n_int_ = n_int;
  p.dns_ = defect_range(n_int.adjoint(), rtol);
  check_shape(x_int, p.dns_.rank(), p.dns_.rank(), "X");
  p.x_int_ = HermitianMatrix::checked(x_int);
  check_norm(x_int, "X");
  return p;
}

CMatrix NXParam::f_hat() const {
  const CMatrix& e = dns_.embedding;
  return dns_.op * e * x_int_.matrix() * e.adjoint() * dns_.op;
}

CMatrix NXParam::d_intrinsic() const {
  const CMatrix& e = dd_.embedding;
  return e.adjoint() * d_.matrix() * e;
}

namespace {

CMatrix nx_state_block(const NXParam& p) {
  const CMatrix n_amb = p.N() * p.defect_d().embedding.adjoint();
  return -n_amb * p.D().matrix() * n_amb.adjoint() + p.f_hat();
}

}  // namespace

PassiveSystem assemble_selfadjoint_nx(const NXParam& p) {
  const CMatrix n_amb = p.N() * p.defect_d().embedding.adjoint();
  const CMatrix c = p.defect_d().op * n_amb.adjoint();
  const CMatrix t = block_matrix(p.D().matrix(), c, c.adjoint(), nx_state_block(p));
  return PassiveSystem::validate(HermitianMatrix(t).matrix(), p.D().dim(), true);
}

NXExtraction extract_nx(const PassiveSystem& sys, double rtol) {
  require_selfadjoint(sys, "extract_nx");
  const CMatrix d = sys.D();
  const DefectRange dd = defect_range(d, rtol);
  const CMatrix n_amb = (dd.op_pinv * sys.C()).adjoint();
  const CMatrix n_int = n_amb * dd.embedding;
  const DefectRange dns = defect_range(n_int.adjoint(), rtol);
  const CMatrix x_amb = dns.op_pinv * (sys.A() + n_amb * d * n_amb.adjoint()) * dns.op_pinv;
  const CMatrix x_int = HermitianMatrix(dns.embedding.adjoint() * x_amb * dns.embedding).matrix();
  NXParam p = NXParam::make(d, n_int, x_int, rtol);
  const double res = residual(assemble_selfadjoint_nx(p).matrix(), sys.matrix());
  if (res > kReassemblyTol) {
    throw Error(ErrorKind::IllConditioned,
                "reassembly residual " + std::to_string(res) + " exceeds tolerance");
  }
  return {std::move(p), res};
}

CMatrix lemma_w(const NXParam& p, CutPlanePoint zp) {
  const cdouble z = zp.value();
  const Index r = p.defect_d().rank();
  const Index n = p.dim_state();
  const CMatrix x = solve(identity(n) - z * p.f_hat(), p.N());
  return identity(r) + z * p.d_intrinsic() * p.N().adjoint() * x;
}

CMatrix lemma_w_inverse(const NXParam& p, CutPlanePoint zp) {
  const cdouble z = zp.value();
  const Index r = p.defect_d().rank();
  const Index n = p.dim_state();
  const CMatrix x = solve(identity(n) - z * nx_state_block(p), p.N());
  return identity(r) - z * p.d_intrinsic() * p.N().adjoint() * x;
}

CMatrix fundamental_jf(const HermitianMatrix& f, double rtol) {
  check_norm(f.matrix(), "F");
  const DefectRange df = defect_range(f.matrix(), rtol);
  const CMatrix& e = df.embedding;
  const CMatrix ed = e.adjoint() * df.op;
  const CMatrix j = block_matrix(-e.adjoint() * f.matrix() * e, ed, ed.adjoint(), f.matrix());
  return HermitianMatrix(j).matrix();
}

}  // namespace nevschur

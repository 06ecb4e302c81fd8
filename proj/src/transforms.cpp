#include "nevschur/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nevschur/blocks.hpp"
#include "nevschur/grids.hpp"

namespace nevschur {

namespace {

double max_dev(const CMatrix& a, const CMatrix& b) {
  return a.size() == 0 ? 0.0 : (a - b).cwiseAbs().maxCoeff();
}

void check_a(double a) {
  if (!std::isfinite(a) || std::abs(a) >= 1.0) {
    throw Error(ErrorKind::InvalidArgument, "parameter a must lie in (-1, 1)");
  }
}

PassiveSystem selfadjoint_result(const CMatrix& t, Index m) {
  return PassiveSystem::validate(HermitianMatrix(t).matrix(), m, true);
}

}  // namespace

cdouble moebius_point(cdouble z, double a) { return (z + a) / (1.0 + a * z); }

CMatrix phi_eval(const PassiveSystem& sys, CutPlanePoint zp) {
  const cdouble z = zp.value();
  const CMatrix o = transfer(sys, zp);
  const Index m = sys.dim_input();
  return (z * identity(m) - o) * inverse(identity(m) - z * o);
}

PassiveSystem phi_realize(const PassiveSystem& sys, double rtol) {
  require_selfadjoint(sys, "phi_realize");
  const Index m = sys.dim_input();
  const CMatrix& t = sys.matrix();
  const DefectRange dt = defect_range(t, rtol);
  const CMatrix& e = dt.embedding;
  const CMatrix de = dt.op * e;  // D_T restricted to ran D_T, ambient rows
  const CMatrix top_right = de.topRows(m);
  const CMatrix bottom_right = e.adjoint() * t * e;
  const CMatrix out = block_matrix(-t.topLeftCorner(m, m), top_right, top_right.adjoint(), bottom_right);
  return selfadjoint_result(out, m);
}

PassiveSystem xi_realize(const PassiveSystem& sys, double a) {
  require_selfadjoint(sys, "xi_realize");
  check_a(a);
  const Index n = sys.dim_state();
  const Index m = sys.dim_input();
  const CMatrix oa = transfer(sys, CutPlanePoint(a));
  if (n == 0) return selfadjoint_result(oa, m);
  const CMatrix f = sys.A();
  const CMatrix res = inverse(identity(n) - a * f);
  const double s = std::sqrt(1.0 - a * a);
  const CMatrix c = s * sys.C() * res;
  const CMatrix fa = (f - a * identity(n)) * res;
  return selfadjoint_result(block_matrix(oa, c, c.adjoint(), fa), m);
}

PassiveSystem operator_moebius(const PassiveSystem& sys, double a) {
  require_selfadjoint(sys, "operator_moebius");
  check_a(a);
  const CMatrix& t = sys.matrix();
  const Index d = t.rows();
  const CMatrix ta = (t - a * identity(d)) * inverse(identity(d) - a * t);
  return selfadjoint_result(ta, sys.dim_input());
}

CMatrix operator_moebius_blocks(const PassiveSystem& sys, double a) {
  require_selfadjoint(sys, "operator_moebius_blocks");
  check_a(a);
  const Index m = sys.dim_input();
  const Index n = sys.dim_state();
  const CMatrix oa = transfer(sys, CutPlanePoint(a));
  const CMatrix w = inverse(identity(m) - a * oa);
  const CMatrix top_left = (oa - a * identity(m)) * w;
  if (n == 0) return top_left;
  const CMatrix f = sys.A();
  const CMatrix res = inverse(identity(n) - a * f);
  const CMatrix c = sys.C();
  const double s2 = 1.0 - a * a;
  const CMatrix top_right = s2 * w * c * res;
  const CMatrix fa = (f - a * identity(n)) * res;
  const CMatrix bottom_right = fa + a * s2 * res * c.adjoint() * w * c * res;
  return block_matrix(top_left, top_right, top_right.adjoint(), bottom_right);
}

RedhefferCoupler::RedhefferCoupler(const CMatrix& k11, const CMatrix& k12, const CMatrix& k22)
    : k11_(k11), k12_(k12), k22_(k22) {
  if (k11.rows() != k11.cols() || k22.rows() != k22.cols() || k12.rows() != k11.rows() ||
      k12.cols() != k22.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "coupler blocks do not fit together");
  }
  const CMatrix k = matrix();
  if (!all_finite(k)) throw Error(ErrorKind::NonFinite, "coupler has non-finite entries");
  if (opnorm(k - k.adjoint()) > kSymmetryTol * std::max(1.0, opnorm(k))) {
    throw Error(ErrorKind::NotSelfadjoint, "coupler is not selfadjoint");
  }
  if (opnorm(k) > 1.0 + kPassivityTol) {
    throw Error(ErrorKind::NotContraction, "coupler is not a contraction");
  }
  k11_ = HermitianMatrix(k11).matrix();
  k22_ = HermitianMatrix(k22).matrix();
}

RedhefferCoupler RedhefferCoupler::from_matrix(const CMatrix& k, Index m) {
  if (k.rows() != k.cols() || m < 1 || m >= k.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "coupler must be square with 1 <= m < dim");
  }
  const Index h = k.rows() - m;
  return RedhefferCoupler(k.topLeftCorner(m, m), k.topRightCorner(m, h), k.bottomRightCorner(h, h));
}

RedhefferCoupler RedhefferCoupler::k_a(double a, Index m) {
  check_a(a);
  const double s = std::sqrt(1.0 - a * a);
  return RedhefferCoupler(a * identity(m), s * identity(m), -a * identity(m));
}

CMatrix RedhefferCoupler::matrix() const {
  return block_matrix(k11_, k12_, k12_.adjoint(), k22_);
}

bool RedhefferCoupler::strict() const { return opnorm(k22_) < 1.0 - 1e-12; }

PassiveSystem redheffer(const RedhefferCoupler& k, const PassiveSystem& sys) {
  require_selfadjoint(sys, "redheffer");
  const Index h = sys.dim_input();
  if (k.dim_inner() != h) {
    throw Error(ErrorKind::DimensionMismatch, "coupler inner dimension must equal the system input");
  }
  const CMatrix a = sys.D();
  if (!k.strict() && max_abs(a) > 1e-10) {
    throw Error(ErrorKind::InfeasibleCoupler,
                "coupler needs ||K22|| < 1 or a system with Omega(0) = 0");
  }
  const Index m = k.dim_outer();
  const CMatrix& k11 = k.k11();
  const CMatrix& k12 = k.k12();
  const CMatrix& k22 = k.k22();
  const CMatrix left = inverse(identity(h) - k22 * a);   // (I - K22 A)^{-1}
  const CMatrix right = inverse(identity(h) - a * k22);  // (I - A K22)^{-1}
  const CMatrix b = sys.C();                             // K -> H
  const CMatrix t11 = k11 + k12 * a * left * k12.adjoint();
  const CMatrix t12 = k12 * right * b;
  const CMatrix t21 = b.adjoint() * left * k12.adjoint();
  const CMatrix t22 = sys.A() + b.adjoint() * k22 * right * b;
  return selfadjoint_result(block_matrix(t11, t12, t21, t22), m);
}

CMatrix redheffer_transfer(const RedhefferCoupler& k, const PassiveSystem& sys, CutPlanePoint z) {
  const CMatrix o = transfer(sys, z);
  const Index h = o.rows();
  return k.k11() + k.k12() * o * inverse(identity(h) - k.k22() * o) * k.k12().adjoint();
}

PassiveSystem pi_a_realize(const PassiveSystem& sys, double a) {
  require_selfadjoint(sys, "pi_a_realize");
  check_a(a);
  const Index m = sys.dim_input();
  const CMatrix d = sys.D();
  const CMatrix r = inverse(identity(m) + a * d);
  const CMatrix top_left = (a * identity(m) + d) * r;
  const Index n = sys.dim_state();
  if (n == 0) return selfadjoint_result(top_left, m);
  const double s = std::sqrt(1.0 - a * a);
  const CMatrix c = sys.C();
  const CMatrix top_right = s * r * c;
  const CMatrix bottom_right = sys.A() - a * c.adjoint() * r * c;
  return selfadjoint_result(block_matrix(top_left, top_right, top_right.adjoint(), bottom_right), m);
}

PassiveSystem zeta_realize(const PassiveSystem& sys, double a) {
  return operator_moebius(xi_realize(sys, -a), a);
}

cdouble omega0_scalar(CutPlanePoint zp) {
  const cdouble z = zp.value();
  return z / (1.0 + std::sqrt(1.0 - z * z));
}

CMatrix omega0_eval(CutPlanePoint z, Index m) { return omega0_scalar(z) * identity(m); }

cdouble m0_scalar(cdouble xi) {
  if (!std::isfinite(xi.real()) || !std::isfinite(xi.imag())) {
    throw Error(ErrorKind::NonFinite, "xi is not finite");
  }
  if (xi.imag() == 0.0 && std::abs(xi.real()) <= 1.0) {
    throw Error(ErrorKind::BranchCut, "xi lies in [-1, 1]");
  }
  const cdouble w = 1.0 / xi;
  return -1.0 / (xi * std::sqrt(1.0 - w * w));
}

CMatrix m0_eval(cdouble xi, Index m) { return m0_scalar(xi) * identity(m); }

PassiveSystem jacobi_system(Index n_blocks, Index m) {
  if (n_blocks < 0 || m < 1) throw Error(ErrorKind::InvalidArgument, "need N >= 0 and m >= 1");
  const Index blocks = n_blocks + 1;
  CMatrix t = CMatrix::Zero(blocks * m, blocks * m);
  for (Index k = 0; k + 1 < blocks; ++k) {
    const double c = k == 0 ? 1.0 / std::sqrt(2.0) : 0.5;
    for (Index i = 0; i < m; ++i) {
      t(k * m + i, (k + 1) * m + i) = c;
      t((k + 1) * m + i, k * m + i) = c;
    }
  }
  return PassiveSystem::validate(t, m, true);
}

cdouble jacobi_error(Index n_blocks, CutPlanePoint zp) {
  if (n_blocks < 0) throw Error(ErrorKind::InvalidArgument, "need N >= 0");
  const cdouble z = zp.value();
  if (n_blocks == 0) return -omega0_scalar(zp);
  // The infinite tail shifts the last diagonal entry of I - zA_N by -u.
  // With theta_k the leading minors of I - zA_N (unit diagonal, off-diagonal
  // -z/2), Sherman-Morrison gives the difference in closed form.
  const cdouble s = std::sqrt(1.0 - z * z);
  const cdouble u = z * z / (2.0 * (1.0 + s));
  const cdouble h2 = z * z / 4.0;
  cdouble prev = 1.0;  // theta_{k-1}
  cdouble cur = 1.0;   // theta_k, starting at k = 1
  for (Index k = 2; k <= n_blocks; ++k) {
    const cdouble next = cur - h2 * prev;
    prev = cur;
    cur = next;
  }
  const cdouble corner = std::pow(z / 2.0, static_cast<double>(n_blocks - 1)) / cur;
  const cdouble last = prev / cur;
  return -z * 0.5 * corner * corner * u / (1.0 - u * last);
}

PassiveSystem inner_system(const HermitianMatrix& d, double rtol) {
  if (opnorm(d.matrix()) > 1.0 + kPassivityTol) {
    throw Error(ErrorKind::NotContraction, "D is not a contraction");
  }
  const DefectRange dd = defect_range(d.matrix(), rtol);
  const CMatrix& e = dd.embedding;
  const CMatrix c = dd.op * e;
  const CMatrix f = -e.adjoint() * d.matrix() * e;
  return selfadjoint_result(block_matrix(d.matrix(), c, c.adjoint(), f), d.dim());
}

CMatrix InnerDilation::eval(CutPlanePoint zp) const {
  const cdouble z = zp.value();
  const CMatrix& a = a_tilde.matrix();
  const Index d = dim_ambient;
  const CMatrix x = solve(identity(d) + z * a, embedding);
  return embedding.adjoint() * (z * x + a * x);
}

InnerDilation inner_dilate(const PassiveSystem& sys) {
  require_selfadjoint(sys, "inner_dilate");
  if (!krylov_analysis(sys).minimal) throw Error(ErrorKind::NonMinimal, "system is not minimal");
  const PassiveSystem phi = phi_realize(sys);
  InnerDilation dil;
  dil.dim_input = sys.dim_input();
  dil.dim_ambient = phi.matrix().rows();
  dil.a_tilde = HermitianMatrix(CMatrix(-phi.matrix()));
  dil.embedding = CMatrix::Identity(dil.dim_ambient, dil.dim_input);
  for (cdouble z : grids::similarity()) {
    const CutPlanePoint zp(z);
    dil.reconstruction_residual =
        std::max(dil.reconstruction_residual, max_dev(dil.eval(zp), transfer(sys, zp)));
  }
  dil.m_simple = krylov_basis(dil.a_tilde.matrix(), dil.embedding).basis.cols() == dil.dim_ambient;
  return dil;
}

CMatrix SpectralMeasure::total() const {
  if (atoms.empty()) return CMatrix::Zero(0, 0);
  CMatrix s = CMatrix::Zero(atoms.front().weight.rows(), atoms.front().weight.cols());
  for (const SpectralAtom& a : atoms) s += a.weight;
  return s;
}

CMatrix SpectralMeasure::eval(CutPlanePoint zp) const {
  const cdouble z = zp.value();
  CMatrix s = CMatrix::Zero(atoms.front().weight.rows(), atoms.front().weight.cols());
  for (const SpectralAtom& a : atoms) s += ((z + a.t) / (1.0 + z * a.t)) * a.weight;
  return s;
}

SpectralMeasure spectral_measure(const InnerDilation& dil) {
  const EigenDecomposition ed = eigh(dil.a_tilde);
  const Index d = ed.values.size();
  const Index m = dil.dim_input;
  SpectralMeasure out;
  Index start = 0;
  while (start < d) {
    Index stop = start + 1;
    while (stop < d && ed.values(stop) - ed.values(stop - 1) <= kAtomMergeTol) ++stop;
    const CMatrix vm = ed.vectors.block(0, start, m, stop - start);
    double t = 0.0;
    for (Index k = start; k < stop; ++k) t += ed.values(k);
    t /= static_cast<double>(stop - start);
    t = std::clamp(t, -1.0, 1.0);
    out.atoms.push_back({t, HermitianMatrix(CMatrix(vm * vm.adjoint())).matrix()});
    start = stop;
  }
  return out;
}

FixedPointReport fixed_point_tests(const PassiveSystem& sys, double a) {
  require_selfadjoint(sys, "fixed_point_tests");
  check_a(a);
  if (a == 0.0) throw Error(ErrorKind::InvalidArgument, "a must be nonzero");
  const double tol = 1e-8;
  const Index m = sys.dim_input();
  const CMatrix id = identity(m);
  const CMatrix o0 = transfer(sys, CutPlanePoint(0.0));
  FixedPointReport rep;
  rep.xi_fixed = rep.infix_fixed = rep.cjdcyjd_fixed = rep.constant = true;
  for (cdouble z : grids::similarity()) {
    const CMatrix o = transfer(sys, CutPlanePoint(z));
    const CMatrix op = transfer(sys, CutPlanePoint(moebius_point(z, a)));
    const CMatrix om = transfer(sys, CutPlanePoint(moebius_point(z, -a)));
    if (max_dev(op, o) > tol) rep.xi_fixed = false;
    if (max_dev((op - a * id) * inverse(id - a * op), o) > tol) rep.infix_fixed = false;
    if (max_dev((om - a * id) * inverse(id - a * om), o) > tol) rep.cjdcyjd_fixed = false;
    if (max_dev(o, o0) > tol) rep.constant = false;
  }
  rep.fundamental_symmetry = rep.constant && max_dev(o0 * o0, id) <= tol;
  return rep;
}

}  // namespace nevschur

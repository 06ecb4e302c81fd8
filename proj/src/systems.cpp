#include "nevschur/systems.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nevschur/grids.hpp"

namespace nevschur {

CutPlanePoint::CutPlanePoint(cdouble z) : z_(z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw Error(ErrorKind::NonFinite, "evaluation point is not finite");
  }
  if (z.imag() == 0.0 && std::abs(z.real()) >= 1.0) {
    throw Error(ErrorKind::BranchCut, "point lies on (-inf,-1] U [1,inf)");
  }
}

CMatrix block_matrix(const CMatrix& d, const CMatrix& c, const CMatrix& b, const CMatrix& a) {
  if (d.rows() != c.rows() || b.rows() != a.rows() || d.cols() != b.cols() || c.cols() != a.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "block sizes do not fit together");
  }
  CMatrix t(d.rows() + b.rows(), d.cols() + c.cols());
  t.topLeftCorner(d.rows(), d.cols()) = d;
  t.topRightCorner(c.rows(), c.cols()) = c;
  t.bottomLeftCorner(b.rows(), b.cols()) = b;
  t.bottomRightCorner(a.rows(), a.cols()) = a;
  return t;
}

namespace {

void check_shape(const CMatrix& t, Index m) {
  if (t.rows() != t.cols()) throw Error(ErrorKind::DimensionMismatch, "T must be square");
  if (m < 1 || m > t.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "input dimension must lie in [1, dim T]");
  }
  if (!all_finite(t)) throw Error(ErrorKind::NonFinite, "T has non-finite entries");
}

}  // namespace

PassiveSystem PassiveSystem::validate(const CMatrix& t, Index m, bool require_sa) {
  check_shape(t, m);
  const double norm = opnorm(t);
  if (require_sa && opnorm(t - t.adjoint()) > kSymmetryTol * std::max(1.0, norm)) {
    throw Error(ErrorKind::NotSelfadjoint, "T is not selfadjoint");
  }
  if (norm > 1.0 + kPassivityTol) {
    throw Error(ErrorKind::NotContraction, "not a contraction: ||T|| = " + std::to_string(norm));
  }
  CMatrix stored = require_sa ? HermitianMatrix(t).matrix() : t;
  return PassiveSystem(std::move(stored), m, require_sa);
}

PassiveSystem PassiveSystem::unchecked(const CMatrix& t, Index m, bool selfadjoint) {
  check_shape(t, m);
  return PassiveSystem(t, m, selfadjoint);
}

void require_selfadjoint(const PassiveSystem& sys, const char* operation) {
  if (!sys.selfadjoint()) {
    throw Error(ErrorKind::NotSelfadjoint, std::string(operation) + " requires a selfadjoint system");
  }
}

CMatrix transfer(const PassiveSystem& sys, CutPlanePoint zp) {
  const cdouble z = zp.value();
  const Index n = sys.dim_state();
  if (n == 0 || z == cdouble(0.0)) return sys.D();
  const CMatrix x = solve(identity(n) - z * sys.A(), sys.B());
  return sys.D() + z * sys.C() * x;
}

CMatrix transfer_derivative(const PassiveSystem& sys, CutPlanePoint zp) {
  const cdouble z = zp.value();
  const Index n = sys.dim_state();
  if (n == 0) return CMatrix::Zero(sys.dim_input(), sys.dim_input());
  const CMatrix r = identity(n) - z * sys.A();
  const CMatrix x = solve(r, sys.B());
  return sys.C() * solve(r, x);
}

CMatrix compressed_resolvent(const HermitianMatrix& t, Index m, cdouble xi) {
  if (!std::isfinite(xi.real()) || !std::isfinite(xi.imag())) {
    throw Error(ErrorKind::NonFinite, "xi is not finite");
  }
  if (xi.imag() == 0.0 && std::abs(xi.real()) <= 1.0) {
    throw Error(ErrorKind::BranchCut, "xi lies in [-1, 1]");
  }
  const Index d = t.dim();
  if (m < 1 || m > d) throw Error(ErrorKind::DimensionMismatch, "bad input dimension");
  const CMatrix rhs = CMatrix::Identity(d, m);
  const CMatrix x = solve(t.matrix() - xi * identity(d), rhs);
  return x.topRows(m);
}

CMatrix compressed_inverse_resolvent(const CMatrix& t, Index m, CutPlanePoint zp) {
  const Index d = t.rows();
  if (m < 1 || m > d) throw Error(ErrorKind::DimensionMismatch, "bad input dimension");
  const CMatrix x = solve(identity(d) - zp.value() * t, CMatrix::Identity(d, m));
  return x.topRows(m);
}

namespace {

// Net recurrence for one Krylov block: Q_k = A Q_{k-1} R_k - Q_prev H_k
// (for k = 0: Q_0 = S R_0).
struct KrylovStep {
  CMatrix r;
  CMatrix h;
};

struct KrylovRun {
  CMatrix basis;
  std::vector<KrylovStep> steps;
  bool near_tolerance = false;
};

// Orthonormalizes the columns of w through its Gram matrix and a second
// symmetric pass. Returns the right factor R with w R orthonormal.
CMatrix compress(const CMatrix& w, double cutoff, bool& near) {
  const EigenDecomposition ed = eigh(HermitianMatrix(CMatrix(w.adjoint() * w)));
  const Index c = w.cols();
  std::vector<Index> keep;
  for (Index k = c - 1; k >= 0; --k) {
    const double lam = ed.values(k);
    if (lam > cutoff / 10.0 && lam < cutoff * 10.0) near = true;
    if (lam > cutoff) keep.push_back(k);
  }
  CMatrix r(c, static_cast<Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) {
    const Index k = keep[j];
    r.col(static_cast<Index>(j)) = ed.vectors.col(k) / std::sqrt(ed.values(k));
  }
  return r;
}

CMatrix inv_sqrt_gram(const CMatrix& q) {
  const EigenDecomposition ed = eigh(HermitianMatrix(CMatrix(q.adjoint() * q)));
  RVector s(ed.values.size());
  for (Index i = 0; i < s.size(); ++i) s(i) = 1.0 / std::sqrt(ed.values(i));
  return ed.vectors * s.cast<cdouble>().asDiagonal() * ed.vectors.adjoint();
}

KrylovRun krylov_run(const CMatrix& a, const CMatrix& start, double rtol) {
  const Index n = a.rows();
  KrylovRun run;
  run.basis = CMatrix::Zero(n, 0);
  if (n == 0 || start.cols() == 0) return run;

  const double s_norm = opnorm(start);
  if (s_norm == 0.0) return run;
  const double a_norm = std::max(opnorm(a), std::numeric_limits<double>::min());

  CMatrix r0 = compress(start, rtol * s_norm * s_norm, run.near_tolerance);
  if (r0.cols() == 0) return run;
  CMatrix q0 = start * r0;
  r0 = r0 * inv_sqrt_gram(q0);
  run.basis = start * r0;
  run.steps.push_back({r0, CMatrix::Zero(0, r0.cols())});

  CMatrix last = run.basis;
  const double cutoff = rtol * a_norm * a_norm;
  while (run.basis.cols() < n) {
    const CMatrix& q = run.basis;
    const CMatrix av = a * last;
    CMatrix w = av;
    for (int pass = 0; pass < 2; ++pass) w -= q * (q.adjoint() * w);
    CMatrix r = compress(w, cutoff, run.near_tolerance);
    if (r.cols() == 0) break;
    CMatrix blk = w * r;
    blk -= q * (q.adjoint() * blk);
    r = r * inv_sqrt_gram(blk);
    // Net coefficients with respect to A Q_{k-1}.
    CMatrix h = q.adjoint() * (av * r);
    blk = av * r - q * h;
    h += q.adjoint() * blk;
    blk = av * r - q * h;
    const CMatrix g = inv_sqrt_gram(blk);
    r = r * g;
    h = h * g;
    blk = av * r - q * h;
    run.steps.push_back({r, h});
    CMatrix grown(n, q.cols() + blk.cols());
    grown << q, blk;
    run.basis = std::move(grown);
    last = blk;
  }
  return run;
}

// Applies a recorded recurrence to another (A, S) pair.
CMatrix krylov_replay(const CMatrix& a, const CMatrix& start, const KrylovRun& run) {
  const Index n = a.rows();
  CMatrix q = CMatrix::Zero(n, 0);
  CMatrix last;
  for (std::size_t k = 0; k < run.steps.size(); ++k) {
    const KrylovStep& st = run.steps[k];
    CMatrix blk = k == 0 ? CMatrix(start * st.r) : CMatrix(a * last * st.r - q * st.h);
    CMatrix grown(n, q.cols() + blk.cols());
    grown << q, blk;
    q = std::move(grown);
    last = blk;
  }
  return q;
}

}  // namespace

KrylovBasis krylov_basis(const CMatrix& a, const CMatrix& start, double rtol) {
  if (a.rows() != a.cols() || start.rows() != a.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "krylov_basis: dimension mismatch");
  }
  KrylovRun run = krylov_run(a, start, rtol);
  return {std::move(run.basis), run.near_tolerance};
}

KrylovReport krylov_analysis(const PassiveSystem& sys, double rtol) {
  const Index n = sys.dim_state();
  KrylovReport rep;
  if (n == 0) {
    rep.minimal = rep.simple = true;
    return rep;
  }
  const KrylovBasis ctrl = krylov_basis(sys.A(), sys.B(), rtol);
  const KrylovBasis obs = krylov_basis(sys.A().adjoint(), sys.C().adjoint(), rtol);
  rep.controllable_dim = ctrl.basis.cols();
  rep.observable_dim = obs.basis.cols();
  rep.minimal = rep.controllable_dim == n && rep.observable_dim == n;
  rep.near_tolerance = ctrl.near_tolerance || obs.near_tolerance;

  CMatrix both(n, ctrl.basis.cols() + obs.basis.cols());
  both << ctrl.basis, obs.basis;
  Index joint = 0;
  if (both.cols() > 0) {
    const EigenDecomposition ed = eigh(HermitianMatrix(CMatrix(both.adjoint() * both)));
    // Columns are orthonormal within each family, so the Gram spectrum lies
    // in [0, 2]; directions shared by both families produce eigenvalue 2.
    for (Index k = 0; k < ed.values.size(); ++k) {
      if (ed.values(k) > rtol) ++joint;
      if (ed.values(k) > rtol / 10.0 && ed.values(k) < rtol * 10.0) rep.near_tolerance = true;
    }
  }
  rep.simple = joint >= n;
  return rep;
}

double Trajectory::min_energy_defect() const {
  double m = std::numeric_limits<double>::infinity();
  for (double e : energy_defect) m = std::min(m, e);
  return m;
}

Trajectory simulate(const PassiveSystem& sys, const CVector& h0, const std::vector<CVector>& inputs) {
  const Index n = sys.dim_state();
  const Index m = sys.dim_input();
  if (h0.size() != n) throw Error(ErrorKind::DimensionMismatch, "initial state has wrong length");
  const CMatrix a = sys.A(), b = sys.B(), c = sys.C(), d = sys.D();
  Trajectory tr;
  tr.states.push_back(h0);
  for (const CVector& xi : inputs) {
    if (xi.size() != m) throw Error(ErrorKind::DimensionMismatch, "input vector has wrong length");
    if (!all_finite(xi)) throw Error(ErrorKind::NonFinite, "input vector is not finite");
    const CVector& h = tr.states.back();
    CVector next = a * h + b * xi;
    CVector out = c * h + d * xi;
    tr.energy_defect.push_back(h.squaredNorm() + xi.squaredNorm() - next.squaredNorm() -
                               out.squaredNorm());
    tr.inputs.push_back(xi);
    tr.outputs.push_back(std::move(out));
    tr.states.push_back(std::move(next));
  }
  return tr;
}

std::optional<CMatrix> unitary_similarity(const PassiveSystem& s1, const PassiveSystem& s2,
                                          double rtol) {
  require_selfadjoint(s1, "unitary_similarity");
  require_selfadjoint(s2, "unitary_similarity");
  if (s1.dim_input() != s2.dim_input()) {
    throw Error(ErrorKind::DimensionMismatch, "systems have different input spaces");
  }
  const KrylovReport k1 = krylov_analysis(s1);
  const KrylovReport k2 = krylov_analysis(s2);
  if (!k1.minimal || !k2.minimal) throw Error(ErrorKind::NonMinimal, "system is not minimal");
  if (s1.dim_state() != s2.dim_state()) return std::nullopt;

  for (cdouble z : grids::similarity()) {
    const CMatrix w1 = transfer(s1, CutPlanePoint(z));
    const CMatrix w2 = transfer(s2, CutPlanePoint(z));
    if ((w1 - w2).cwiseAbs().maxCoeff() > rtol * std::max(1.0, max_abs(w1))) return std::nullopt;
  }

  const Index n = s1.dim_state();
  if (n == 0) return CMatrix::Zero(0, 0);
  const KrylovRun run = krylov_run(s1.A(), s1.B(), kDefaultRtol);
  if (run.basis.cols() != n) return std::nullopt;
  const CMatrix q2 = krylov_replay(s2.A(), s2.B(), run);
  const CMatrix u = q2 * run.basis.adjoint();

  const double tol = 1e-8;
  auto close = [tol](const CMatrix& x, const CMatrix& y) {
    return (x - y).cwiseAbs().maxCoeff() <= tol;
  };
  if (!close(u.adjoint() * u, identity(n))) return std::nullopt;
  if (!close(s2.A(), u * s1.A() * u.adjoint())) return std::nullopt;
  if (!close(s2.B(), u * s1.B())) return std::nullopt;
  if (!close(s2.C(), s1.C() * u.adjoint())) return std::nullopt;
  if (!close(s2.D(), s1.D())) return std::nullopt;
  return u;
}

}  // namespace nevschur

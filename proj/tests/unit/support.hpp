#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "nevschur/numkit.hpp"
#include "nevschur/random.hpp"
#include "nevschur/systems.hpp"

namespace nevschur::testing {

inline double max_dev(const CMatrix& a, const CMatrix& b) {
  return a.size() == 0 ? 0.0 : (a - b).cwiseAbs().maxCoeff();
}

/// Omega from the compressed resolvent of the full operator:
/// P(I - zT)^{-1}P = (I - z Omega)^{-1}, so Omega = (I - Q^{-1}) / z.
inline CMatrix transfer_oracle(const CMatrix& t, Index m, cdouble z) {
  if (z == cdouble(0.0)) return t.topLeftCorner(m, m);
  const Index d = t.rows();
  const CMatrix full = (CMatrix::Identity(d, d) - z * t).inverse();
  const CMatrix q = full.topLeftCorner(m, m);
  return (CMatrix::Identity(m, m) - q.inverse()) / z;
}

inline CMatrix transfer_oracle(const PassiveSystem& s, cdouble z) {
  return transfer_oracle(s.matrix(), s.dim_input(), z);
}

/// Eigen's own solver, independent of the library's Jacobi iteration.
inline Eigen::SelfAdjointEigenSolver<CMatrix> eigen_ref(const CMatrix& h) {
  return Eigen::SelfAdjointEigenSolver<CMatrix>(CMatrix((h + h.adjoint()) / 2.0));
}

inline double ref_norm(const CMatrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<CMatrix> svd(a);
  return svd.singularValues()(0);
}

inline CMatrix moebius_oracle(const CMatrix& t, double a) {
  const Index d = t.rows();
  const CMatrix i = CMatrix::Identity(d, d);
  return (t - a * i) * (i - a * t).inverse();
}

/// Minimal random selfadjoint system (retries seeds that happen to be non-minimal).
inline PassiveSystem random_minimal(Rng& rng, Index m, Index n) {
  for (;;) {
    PassiveSystem s = random_selfadjoint_system(rng, m, n);
    if (krylov_analysis(s).minimal) return s;
  }
}

}  // namespace nevschur::testing

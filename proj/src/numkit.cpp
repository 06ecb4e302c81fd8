#include "nevschur/numkit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace nevschur {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid_argument";
    case ErrorKind::DimensionMismatch: return "dimension_mismatch";
    case ErrorKind::NonFinite: return "non_finite";
    case ErrorKind::NotContraction: return "not_contraction";
    case ErrorKind::NotSelfadjoint: return "not_selfadjoint";
    case ErrorKind::NotPSD: return "not_psd";
    case ErrorKind::NearSingular: return "near_singular";
    case ErrorKind::IllConditioned: return "ill_conditioned";
    case ErrorKind::NonMinimal: return "non_minimal";
    case ErrorKind::InfeasibleCoupler: return "infeasible_coupler";
    case ErrorKind::BranchCut: return "branch_cut";
    case ErrorKind::Parse: return "parse_error";
    case ErrorKind::Io: return "io_error";
  }
  return "unknown";
}

bool all_finite(const CMatrix& a) {
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      if (!std::isfinite(a(i, j).real()) || !std::isfinite(a(i, j).imag())) return false;
    }
  }
  return true;
}

double max_abs(const CMatrix& a) {
  double m = 0.0;
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) m = std::max(m, std::abs(a(i, j)));
  }
  return m;
}

CMatrix identity(Index n) { return CMatrix::Identity(n, n); }

HermitianMatrix::HermitianMatrix(const CMatrix& a) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "Hermitian matrix must be square");
  }
  if (!all_finite(a)) throw Error(ErrorKind::NonFinite, "matrix has non-finite entries");
  m_ = (a + a.adjoint()) * 0.5;
  for (Index i = 0; i < m_.rows(); ++i) m_(i, i) = cdouble(m_(i, i).real(), 0.0);
}

HermitianMatrix HermitianMatrix::checked(const CMatrix& a, double tol) {
  if (a.rows() != a.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "Hermitian matrix must be square");
  }
  if (!all_finite(a)) throw Error(ErrorKind::NonFinite, "matrix has non-finite entries");
  const double asym = (a - a.adjoint()).norm();
  if (asym > tol * std::max(1.0, a.norm())) {
    throw Error(ErrorKind::NotSelfadjoint, "not selfadjoint");
  }
  return HermitianMatrix(a);
}

namespace {

// One sweep pass visits pairs (p, q) in row-cyclic order.
void jacobi_diagonalize(CMatrix& a, CMatrix& v) {
  const Index n = a.rows();
  const double scale = a.norm();
  if (n < 2 || scale == 0.0) return;
  const double target = std::numeric_limits<double>::epsilon() * 1e-2 * scale;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (Index p = 0; p < n; ++p) {
      for (Index q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    }
    if (std::sqrt(off) <= target) break;
    for (Index p = 0; p < n - 1; ++p) {
      for (Index q = p + 1; q < n; ++q) {
        const cdouble apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double theta = (aqq - app) / (2.0 * mag);
        double t;
        if (std::isinf(theta)) {
          t = 0.5 / theta;
        } else {
          t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const cdouble e = apq / mag;
        const cdouble ebar = std::conj(e);
        // G = [[c, s], [-s*conj(e), c*conj(e)]] on coordinates (p, q).
        for (Index k = 0; k < n; ++k) {
          const cdouble akp = a(k, p);
          const cdouble akq = a(k, q);
          a(k, p) = c * akp - s * ebar * akq;
          a(k, q) = s * akp + c * ebar * akq;
        }
        for (Index k = 0; k < n; ++k) {
          const cdouble apk = a(p, k);
          const cdouble aqk = a(q, k);
          a(p, k) = c * apk - s * e * aqk;
          a(q, k) = s * apk + c * e * aqk;
        }
        for (Index k = 0; k < n; ++k) {
          const cdouble vkp = v(k, p);
          const cdouble vkq = v(k, q);
          v(k, p) = c * vkp - s * ebar * vkq;
          v(k, q) = s * vkp + c * ebar * vkq;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = cdouble(a(p, p).real(), 0.0);
        a(q, q) = cdouble(a(q, q).real(), 0.0);
      }
    }
  }
}

}  // namespace

EigenDecomposition eigh(const HermitianMatrix& h) {
  const Index n = h.dim();
  CMatrix a = h.matrix();
  CMatrix v = CMatrix::Identity(n, n);
  jacobi_diagonalize(a, v);

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index i, Index j) { return a(i, i).real() < a(j, j).real(); });

  EigenDecomposition out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Index k = 0; k < n; ++k) {
    const Index src = order[static_cast<std::size_t>(k)];
    out.values(k) = a(src, src).real();
    CVector col = v.col(src);
    Index lead = 0;
    double best = -1.0;
    for (Index i = 0; i < n; ++i) {
      const double mag = std::abs(col(i));
      if (mag > best) {
        best = mag;
        lead = i;
      }
    }
    if (best > 0.0) col *= std::conj(col(lead)) / best;
    col(lead) = cdouble(col(lead).real(), 0.0);
    out.vectors.col(k) = col;
  }
  return out;
}

namespace {

CMatrix reconstruct(const CMatrix& vecs, const RVector& vals) {
  return vecs * vals.cast<cdouble>().asDiagonal() * vecs.adjoint();
}

}  // namespace

HermitianMatrix psd_sqrt(const HermitianMatrix& a) {
  const Index n = a.dim();
  if (n == 0) return a;
  const EigenDecomposition ed = eigh(a);
  const double scale = std::max(1.0, std::max(std::abs(ed.values(0)), std::abs(ed.values(n - 1))));
  if (ed.values(0) < -1e-10 * scale) {
    throw Error(ErrorKind::NotPSD, "not PSD: eigenvalue " + std::to_string(ed.values(0)));
  }
  RVector roots(n);
  for (Index i = 0; i < n; ++i) roots(i) = std::sqrt(std::max(0.0, ed.values(i)));
  return HermitianMatrix(reconstruct(ed.vectors, roots));
}

CMatrix pinv(const CMatrix& a, double rtol) {
  const Index p = a.rows();
  const Index q = a.cols();
  if (p == 0 || q == 0) return CMatrix::Zero(q, p);
  CMatrix dil = CMatrix::Zero(p + q, p + q);
  dil.topRightCorner(p, q) = a;
  dil.bottomLeftCorner(q, p) = a.adjoint();
  const EigenDecomposition ed = eigh(HermitianMatrix(dil));
  const double smax = std::max(0.0, ed.values(p + q - 1));
  CMatrix out = CMatrix::Zero(q, p);
  if (smax == 0.0) return out;
  // Positive eigenvalues +sigma carry eigenvectors (u; v)/sqrt(2).
  for (Index k = p + q - 1; k >= 0; --k) {
    const double sigma = ed.values(k);
    if (sigma <= rtol * smax) break;
    const CVector u = ed.vectors.col(k).head(p);
    const CVector v = ed.vectors.col(k).tail(q);
    out += (2.0 / sigma) * v * u.adjoint();
  }
  return out;
}

CMatrix range_embed(const HermitianMatrix& a, double rtol) {
  const Index n = a.dim();
  if (n == 0) return CMatrix::Zero(0, 0);
  const EigenDecomposition ed = eigh(a);
  const double top = ed.values(n - 1);
  const double scale = std::max(1.0, std::max(std::abs(ed.values(0)), std::abs(top)));
  if (ed.values(0) < -1e-10 * scale) {
    throw Error(ErrorKind::NotPSD, "range_embed requires a PSD matrix");
  }
  Index rank = 0;
  if (top > 0.0) {
    for (Index k = n - 1; k >= 0 && ed.values(k) > rtol * top; --k) ++rank;
  }
  CMatrix e(n, rank);
  for (Index j = 0; j < rank; ++j) e.col(j) = ed.vectors.col(n - 1 - j);
  return e;
}

double opnorm(const CMatrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  const CMatrix gram = a.rows() < a.cols() ? CMatrix(a * a.adjoint()) : CMatrix(a.adjoint() * a);
  const EigenDecomposition ed = eigh(HermitianMatrix(gram));
  return std::sqrt(std::max(0.0, ed.values(ed.values.size() - 1)));
}

Defect defect(const CMatrix& t, double rtol) {
  const Index q = t.cols();
  Defect out;
  if (q == 0) {
    out.op = HermitianMatrix(CMatrix::Zero(0, 0));
    out.embedding = CMatrix::Zero(0, 0);
    return out;
  }
  const EigenDecomposition ed = eigh(HermitianMatrix(identity(q) - t.adjoint() * t));
  if (ed.values(0) < -1e-10) {
    throw Error(ErrorKind::NotContraction, "not a contraction");
  }
  RVector roots(q);
  for (Index i = 0; i < q; ++i) roots(i) = std::sqrt(std::max(0.0, ed.values(i)));
  out.op = HermitianMatrix(reconstruct(ed.vectors, roots));
  Index rank = 0;
  for (Index k = q - 1; k >= 0 && ed.values(k) > rtol; --k) ++rank;
  out.embedding.resize(q, rank);
  for (Index j = 0; j < rank; ++j) out.embedding.col(j) = ed.vectors.col(q - 1 - j);
  return out;
}

double condition_number(const CMatrix& a) {
  if (a.rows() == 0) return 1.0;
  Eigen::PartialPivLU<CMatrix> lu(a);
  const auto& u = lu.matrixLU();
  for (Index i = 0; i < u.rows(); ++i) {
    if (u(i, i) == cdouble(0.0)) return std::numeric_limits<double>::infinity();
  }
  const CMatrix inv = lu.inverse();
  if (!all_finite(inv)) return std::numeric_limits<double>::infinity();
  auto norm1 = [](const CMatrix& m) {
    double best = 0.0;
    for (Index j = 0; j < m.cols(); ++j) best = std::max(best, m.col(j).cwiseAbs().sum());
    return best;
  };
  return norm1(a) * norm1(inv);
}

CMatrix solve(const CMatrix& a, const CMatrix& b, double max_cond) {
  if (a.rows() != a.cols() || a.rows() != b.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "solve: dimension mismatch");
  }
  if (a.rows() == 0) return CMatrix::Zero(0, b.cols());
  const double cond = condition_number(a);
  if (!(cond <= max_cond)) {
    throw Error(ErrorKind::NearSingular, "near-singular resolvent (condition " +
                                             std::to_string(cond) + ")");
  }
  return a.partialPivLu().solve(b);
}

CMatrix inverse(const CMatrix& a, double max_cond) {
  return solve(a, identity(a.rows()), max_cond);
}

}  // namespace nevschur

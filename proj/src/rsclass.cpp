#include "nevschur/rsclass.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "nevschur/grids.hpp"
#include "nevschur/transforms.hpp"

namespace nevschur {

namespace {

double min_eig(const CMatrix& h) {
  if (h.rows() == 0) return 0.0;
  return eigh(HermitianMatrix(h)).values(0);
}

double max_dev(const CMatrix& a, const CMatrix& b) {
  return a.size() == 0 ? 0.0 : (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

CMatrix characteristic_fn(const HermitianMatrix& f, CutPlanePoint zp, double rtol) {
  const cdouble z = zp.value();
  const Index n = f.dim();
  const DefectRange df = defect_range(f.matrix(), rtol);
  const CMatrix num = z * identity(n) - f.matrix();
  const CMatrix val = num * inverse(identity(n) - z * f.matrix());
  return df.embedding.adjoint() * val * df.embedding;
}

CMatrix pick_kernel(const PassiveSystem& sys, CutPlanePoint zp, CutPlanePoint wp) {
  const cdouble z = zp.value();
  const cdouble w = wp.value();
  const cdouble den = z - std::conj(w);
  if (std::abs(den) == 0.0) {
    throw Error(ErrorKind::InvalidArgument, "pick kernel is singular at z = conj(w)");
  }
  const CMatrix oz = transfer(sys, zp);
  const CMatrix ow = transfer(sys, wp);
  const cdouble factor = (1.0 - std::conj(w) * z) / den;
  const Index m = sys.dim_input();
  return identity(m) - ow.adjoint() * oz - factor * (oz - ow.adjoint());
}

CertificateGrid CertificateGrid::standard() {
  return {grids::certificate_upper(), grids::certificate_lower(), grids::disk()};
}

namespace {

CMatrix assemble_kernel(const PassiveSystem& sys, const std::vector<cdouble>& pts) {
  const Index m = sys.dim_input();
  const Index k = static_cast<Index>(pts.size());
  CMatrix big(k * m, k * m);
  for (Index j = 0; j < k; ++j) {
    for (Index i = 0; i < k; ++i) {
      big.block(j * m, i * m, m, m) =
          pick_kernel(sys, CutPlanePoint(pts[static_cast<std::size_t>(i)]),
                      CutPlanePoint(pts[static_cast<std::size_t>(j)]));
    }
  }
  return big;
}

}  // namespace

RSCertificate certify_rs(const PassiveSystem& sys, const CertificateGrid& grid) {
  RSCertificate cert;
  cert.grid = grid;
  const Index m = sys.dim_input();

  double kernel_scale = 1.0;
  double kmin = std::numeric_limits<double>::infinity();
  for (const auto* half : {&grid.upper, &grid.lower}) {
    if (half->empty()) continue;
    const CMatrix big = assemble_kernel(sys, *half);
    kernel_scale = std::max(kernel_scale, opnorm(big));
    kmin = std::min(kmin, min_eig(big));
  }
  cert.min_kernel_eig = std::isfinite(kmin) ? kmin : 0.0;

  double imin = std::numeric_limits<double>::infinity();
  for (const auto* half : {&grid.upper, &grid.lower}) {
    for (cdouble z : *half) {
      const CMatrix o = transfer(sys, CutPlanePoint(z));
      const CMatrix im = (o - o.adjoint()) / cdouble(0.0, 2.0);
      const CMatrix q = identity(m) - o.adjoint() * o - ((1.0 - std::norm(z)) / z.imag()) * im;
      imin = std::min(imin, min_eig(q));
    }
  }
  cert.min_inequality_eig = std::isfinite(imin) ? imin : 0.0;

  for (cdouble z : grid.disk) {
    cert.schur_norm_max = std::max(cert.schur_norm_max, opnorm(transfer(sys, CutPlanePoint(z))));
  }

  cert.tol_psd = 1e-8 * kernel_scale;
  cert.pass = cert.min_kernel_eig >= -cert.tol_psd && cert.min_inequality_eig >= -cert.tol_psd &&
              cert.schur_norm_max <= 1.0 + cert.tol_norm;
  return cert;
}

LimitValues limit_values(const KYParam& p) {
  const CMatrix kk = p.K() * p.K().adjoint();
  const CMatrix y = p.y_part();
  return {HermitianMatrix(CMatrix(-kk + y)).matrix(), HermitianMatrix(CMatrix(kk + y)).matrix()};
}

CMatrix MoebiusRep::lambda(CutPlanePoint z) const {
  if (!lambda_system) return CMatrix::Zero(0, 0);
  return transfer(*lambda_system, z);
}

CMatrix MoebiusRep::reconstruct(CutPlanePoint z) const {
  if (!lambda_system) return omega0;
  const CMatrix lam = lambda(z);
  const CMatrix d_int = defect_embedding.adjoint() * omega0 * defect_embedding;
  const Index r = lam.rows();
  const CMatrix inner = lam * inverse(identity(r) + d_int * lam);
  return omega0 + defect_onto.adjoint() * inner * defect_onto;
}

CMatrix lambda_via_pinv(const PassiveSystem& sys, const MoebiusRep& rep, CutPlanePoint z) {
  const CMatrix o = transfer(sys, z);
  const Index m = sys.dim_input();
  const CMatrix d0 = rep.omega0;
  const DefectRange dd = defect_range(d0);
  const CMatrix core = (o - d0) * inverse(identity(m) - d0 * o);
  const CMatrix& e = rep.defect_embedding;
  return e.adjoint() * pinv(dd.op) * core * dd.op * e;
}

MoebiusRep moebius_rep(const PassiveSystem& sys) {
  require_selfadjoint(sys, "moebius_rep");
  const NXExtraction nx = extract_nx(sys);
  const NXParam& p = nx.param;
  MoebiusRep rep;
  rep.omega0 = p.D().matrix();
  rep.defect_embedding = p.defect_d().embedding;
  rep.defect_onto = p.defect_d().onto();
  const Index r = p.defect_d().rank();
  if (r > 0) {
    const CMatrix t0 = block_matrix(CMatrix::Zero(r, r), p.N().adjoint(), p.N(), p.f_hat());
    rep.lambda_system = PassiveSystem::validate(HermitianMatrix(t0).matrix(), r, true);
  }
  for (cdouble z : grids::disk()) {
    const CutPlanePoint zp(z);
    rep.reconstruction_residual =
        std::max(rep.reconstruction_residual, max_dev(rep.reconstruct(zp), transfer(sys, zp)));
    if (r > 0) {
      rep.pinv_crosscheck_residual = std::max(rep.pinv_crosscheck_residual,
                                              max_dev(lambda_via_pinv(sys, rep, zp), rep.lambda(zp)));
    }
  }
  if (rep.reconstruction_residual > 1e-8) {
    throw Error(ErrorKind::IllConditioned, "Moebius reconstruction residual " +
                                               std::to_string(rep.reconstruction_residual));
  }
  return rep;
}

CMatrix inner_form(const CMatrix& d, cdouble z) {
  const Index m = d.rows();
  return (z * identity(m) + d) * inverse(identity(m) + z * d);
}

InnerReport inner_test(const PassiveSystem& sys) {
  require_selfadjoint(sys, "inner_test");
  if (!krylov_analysis(sys).minimal) throw Error(ErrorKind::NonMinimal, "system is not minimal");
  const Index m = sys.dim_input();
  const double tol = 1e-8;
  InnerReport rep;

  const CMatrix d0 = transfer(sys, CutPlanePoint(0.0));
  for (cdouble z : grids::similarity()) {
    const CutPlanePoint zp(z);
    rep.fit_residual = std::max(rep.fit_residual, max_dev(transfer(sys, zp), inner_form(d0, z)));
  }
  rep.is_inner = rep.fit_residual <= tol;
  if (rep.is_inner) rep.d_fit = d0;

  const KYExtraction ky = extract_ky(sys);
  const LimitValues lim = limit_values(ky.param);
  const CMatrix id = identity(m);
  rep.neuvaa[0] = max_dev(lim.plus * lim.plus, id) <= tol && max_dev(lim.minus * lim.minus, id) <= tol;
  const CMatrix half_diff = (lim.plus - lim.minus) / 2.0;
  const CMatrix half_sum = (lim.plus + lim.minus) / 2.0;
  rep.neuvaa[1] = max_dev(half_diff * half_diff, half_diff) <= tol &&
                  max_dev(half_sum * half_sum, id - half_diff) <= tol;
  const CMatrix& k = ky.param.K();
  const CMatrix ksk = k.adjoint() * k;
  const CMatrix& y = ky.param.Y().matrix();
  rep.neuvaa[2] = max_dev(ksk * ksk, ksk) <= tol && max_dev(y * y, identity(y.rows())) <= tol;

  const double a = 0.5;
  const CMatrix oa = transfer(sys, CutPlanePoint(a));
  const CMatrix moved = (oa - a * id) * inverse(id - a * oa);
  rep.thinne_at_a = max_dev(moved, d0) <= tol;

  const CMatrix ou = transfer(sys, CutPlanePoint(std::polar(1.0, std::numbers::pi / 3)));
  rep.unitary_at_probe = max_dev(ou.adjoint() * ou, id) <= tol && max_dev(ou * ou.adjoint(), id) <= tol;

  const std::vector<cdouble> probes = grids::transform_probe();
  rep.commuting = true;
  rep.normal = true;
  for (std::size_t i = 0; i < probes.size(); ++i) {
    const CMatrix oi = transfer(sys, CutPlanePoint(probes[i]));
    if (max_dev(oi * oi.adjoint(), oi.adjoint() * oi) > tol) rep.normal = false;
    for (std::size_t j = i + 1; j < probes.size(); ++j) {
      const CMatrix oj = transfer(sys, CutPlanePoint(probes[j]));
      if (max_dev(oi * oj, oj * oi) > tol) rep.commuting = false;
    }
  }
  return rep;
}

NFunction::NFunction(const HermitianMatrix& t, Index m) : t_(t), m_(m) {
  if (m < 1 || m > t.dim()) throw Error(ErrorKind::DimensionMismatch, "bad input dimension");
  if (opnorm(t.matrix()) > 1.0 + kPassivityTol) {
    throw Error(ErrorKind::NotContraction, "backing operator is not a contraction");
  }
}

CMatrix NFunction::operator()(cdouble xi) const { return compressed_resolvent(t_, m_, xi); }

NFunction to_nfunction(const PassiveSystem& sys) {
  require_selfadjoint(sys, "to_nfunction");
  return NFunction(HermitianMatrix(sys.matrix()), sys.dim_input());
}

PassiveSystem from_nfunction(const NFunction& nf) {
  return PassiveSystem::validate(nf.backing().matrix(), nf.dim(), true);
}

CMatrix u_eval(const PassiveSystem& sys, cdouble xi) {
  if (xi.imag() == 0.0 && std::abs(xi.real()) <= 1.0) {
    throw Error(ErrorKind::BranchCut, "xi lies in [-1, 1]");
  }
  const CMatrix o = transfer(sys, CutPlanePoint(1.0 / xi));
  return inverse(o - xi * identity(sys.dim_input()));
}

CMatrix u_inverse_eval(const NFunction& nf, CutPlanePoint zp) {
  const cdouble z = zp.value();
  const Index m = nf.dim();
  if (z == cdouble(0.0)) return nf.backing().matrix().topLeftCorner(m, m);
  return inverse(nf(1.0 / z)) + (1.0 / z) * identity(m);
}

CMatrix gamma_value(const CMatrix& m_xi, cdouble xi) {
  return inverse(m_xi) / (xi * xi - 1.0);
}

CMatrix gamma_transform(const NFunction& nf, cdouble xi) { return gamma_value(nf(xi), xi); }

NFunction gamma_realize(const NFunction& nf) {
  const PassiveSystem sys = from_nfunction(nf);
  const PassiveSystem phi = phi_realize(sys);
  return NFunction(HermitianMatrix(phi.matrix()), phi.dim_input());
}

}  // namespace nevschur

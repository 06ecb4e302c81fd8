#include "nevschur/random.hpp"

#include <cmath>
#include <numbers>

namespace nevschur {

double Rng::uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

cdouble Rng::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re, im};
}

CMatrix random_matrix(Rng& rng, Index rows, Index cols) {
  CMatrix g(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) g(i, j) = rng.complex_normal();
  }
  return g;
}

CMatrix random_contraction(Rng& rng, Index rows, Index cols) {
  const CMatrix g = random_matrix(rng, rows, cols);
  return g / (opnorm(g) + kContractionMargin);
}

CMatrix random_selfadjoint_contraction(Rng& rng, Index n) {
  const CMatrix g = random_matrix(rng, n, n);
  const CMatrix h = HermitianMatrix(g).matrix();
  return HermitianMatrix(CMatrix(h / (opnorm(h) + kContractionMargin))).matrix();
}

CMatrix random_unitary(Rng& rng, Index n) {
  const CMatrix g = random_matrix(rng, n, n);
  const EigenDecomposition ed = eigh(HermitianMatrix(CMatrix(g.adjoint() * g)));
  RVector s(n);
  for (Index i = 0; i < n; ++i) s(i) = 1.0 / std::sqrt(ed.values(i));
  return g * ed.vectors * s.cast<cdouble>().asDiagonal() * ed.vectors.adjoint();
}

CMatrix random_hermitian_scaled(Rng& rng, Index n, double scale) {
  if (n == 0) return CMatrix::Zero(0, 0);
  const CMatrix h = HermitianMatrix(random_matrix(rng, n, n)).matrix();
  const double nh = opnorm(h);
  if (nh == 0.0) return h;
  return HermitianMatrix(CMatrix(h * (scale / nh))).matrix();
}

PassiveSystem random_selfadjoint_system(Rng& rng, Index m, Index n) {
  return PassiveSystem::validate(random_selfadjoint_contraction(rng, m + n), m, true);
}

KYParam random_ky(Rng& rng, Index m, Index n, double f_scale) {
  const CMatrix f = random_hermitian_scaled(rng, n, f_scale);
  const Index rf = defect_range(f).rank();
  const CMatrix k = random_contraction(rng, m, rf);
  const Index rk = defect_range(k.adjoint()).rank();
  const CMatrix y = rk > 0 ? random_selfadjoint_contraction(rng, rk) : CMatrix::Zero(0, 0);
  return KYParam::make(f, k, y);
}

GeneralBlockParam random_general(Rng& rng, Index rows_top, Index cols_left, Index rows_bottom,
                                 Index cols_right) {
  const CMatrix d = random_contraction(rng, rows_top, cols_left);
  const Index rd = defect_range(d).rank();
  const Index rds = defect_range(d.adjoint()).rank();
  const CMatrix n = random_contraction(rng, rows_bottom, rd);
  const CMatrix g = random_contraction(rng, rds, cols_right);
  const Index rns = defect_range(n.adjoint()).rank();
  const Index rg = defect_range(g).rank();
  const CMatrix l = random_contraction(rng, rns, rg);
  return GeneralBlockParam::make(d, n, g, l);
}

}  // namespace nevschur

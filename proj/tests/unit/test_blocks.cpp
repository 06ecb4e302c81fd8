#include <gtest/gtest.h>

#include "nevschur/blocks.hpp"
#include "nevschur/random.hpp"
#include "support.hpp"

using namespace nevschur;
using nevschur::testing::max_dev;
using nevschur::testing::ref_norm;

namespace {

CMatrix scalar(cdouble x) {
  CMatrix m(1, 1);
  m(0, 0) = x;
  return m;
}

CMatrix swap2() {
  CMatrix t = CMatrix::Zero(2, 2);
  t(0, 1) = t(1, 0) = 1.0;
  return t;
}

}  // namespace

TEST(Assemble, ZeroParametersGiveZero) {
  const GeneralBlockParam p = GeneralBlockParam::make(
      CMatrix::Zero(2, 2), CMatrix::Zero(1, 2), CMatrix::Zero(2, 1), CMatrix::Zero(1, 1));
  EXPECT_EQ(max_abs(assemble_contraction(p)), 0.0);
}

TEST(Assemble, IsometricCorner) {
  const GeneralBlockParam p =
      GeneralBlockParam::make(scalar(0.0), scalar(1.0), scalar(1.0), CMatrix::Zero(0, 0));
  EXPECT_LT(max_dev(assemble_contraction(p), swap2()), 1e-15);
}

TEST(Assemble, RandomParametersGiveContractions) {
  Rng rng(41);
  for (int k = 0; k < 200; ++k) {
    const Index a = 1 + k % 3, b = 1 + (k / 3) % 3, c = 1 + (k / 9) % 5, d = 1 + (k / 45) % 5;
    const CMatrix t = assemble_contraction(random_general(rng, a, b, c, d));
    EXPECT_LE(ref_norm(t), 1.0 + 1e-9);
  }
}

TEST(Assemble, RejectsOversizedParameters) {
  EXPECT_THROW(GeneralBlockParam::make(scalar(1.5), CMatrix::Zero(1, 0), CMatrix::Zero(0, 1),
                                       CMatrix::Zero(0, 0)),
               Error);
}

TEST(Assemble, ExtractGeneralRoundTrip) {
  Rng rng(43);
  for (int k = 0; k < 30; ++k) {
    const CMatrix t = random_contraction(rng, 5, 5);
    const GeneralBlockParam p = extract_general(t, 2, 2);
    EXPECT_LT(max_dev(assemble_contraction(p), t), 1e-9);
  }
}

TEST(DefectIdentity, ZeroVectorsAndUnitaryCase) {
  Rng rng(45);
  const GeneralBlockParam p = random_general(rng, 2, 2, 3, 3);
  EXPECT_EQ(defect_identity_residual(p, CVector::Zero(2), CVector::Zero(3)), 0.0);
  // Unitary T: both sides vanish.
  const CMatrix u = random_unitary(rng, 4);
  const GeneralBlockParam pu = extract_general(u, 2, 2);
  EXPECT_LT(defect_identity_residual(pu, random_matrix(rng, 2, 1), random_matrix(rng, 2, 1)), 1e-9);
}

TEST(DefectIdentity, RandomTuples) {
  Rng rng(47);
  for (int k = 0; k < 100; ++k) {
    const Index a = 1 + k % 3, b = 1 + (k / 3) % 3, c = 1 + k % 4, d = 1 + (k / 4) % 4;
    const GeneralBlockParam p = random_general(rng, a, b, c, d);
    EXPECT_LT(defect_identity_residual(p, random_matrix(rng, b, 1), random_matrix(rng, d, 1)), 1e-9);
  }
}

TEST(KY, SwapExample) {
  const PassiveSystem s = assemble_selfadjoint_ky(KYParam::make(scalar(0.0), scalar(1.0), CMatrix::Zero(0, 0)));
  EXPECT_LT(max_dev(s.matrix(), swap2()), 1e-15);
  const KYExtraction e = extract_ky(s);
  EXPECT_NEAR(std::abs(e.param.K()(0, 0)), 1.0, 1e-12);
  EXPECT_EQ(e.param.defect_k_star().rank(), 0);
  EXPECT_NEAR(e.param.F().matrix()(0, 0).real(), 0.0, 1e-15);
}

TEST(KY, DecoupledWhenKZero) {
  const PassiveSystem s = assemble_selfadjoint_ky(KYParam::make(scalar(0.4), scalar(0.0), scalar(0.7)));
  EXPECT_NEAR(s.C()(0, 0).real(), 0.0, 1e-15);
  EXPECT_NEAR(s.D()(0, 0).real(), 0.7, 1e-15);
  CMatrix diag = CMatrix::Zero(2, 2);
  diag(0, 0) = 0.7;
  diag(1, 1) = 0.4;
  const KYExtraction e = extract_ky(PassiveSystem::validate(diag, 1, true));
  EXPECT_LT(max_abs(e.param.K()), 1e-15);
  EXPECT_LT(max_dev(e.param.y_part(), scalar(0.7)), 1e-12);
}

TEST(KY, RoundTripRandom) {
  Rng rng(49);
  for (int k = 0; k < 100; ++k) {
    const KYParam p = random_ky(rng, 1 + k % 3, 1 + k % 4);
    const PassiveSystem s = assemble_selfadjoint_ky(p);
    const KYExtraction e = extract_ky(s);
    EXPECT_LT(e.reassembly_residual, 1e-9);
    EXPECT_LT(max_dev(assemble_selfadjoint_ky(e.param).matrix(), s.matrix()), 1e-9);
    EXPECT_LT(max_dev(e.param.k_ambient() * e.param.k_ambient().adjoint(),
                      p.k_ambient() * p.k_ambient().adjoint()),
              1e-8);
  }
  for (int k = 0; k < 100; ++k) {
    const PassiveSystem s = random_selfadjoint_system(rng, 2, 4);
    EXPECT_LT(extract_ky(s).reassembly_residual, 1e-9);
  }
}

TEST(KY, UnitaryIffIsometricKAndInvolutiveY) {
  Rng rng(51);
  for (int k = 0; k < 20; ++k) {
    // Hermitian unitary: U diag(+-1) U*.
    const CMatrix u = random_unitary(rng, 5);
    CMatrix s = CMatrix::Zero(5, 5);
    for (Index i = 0; i < 5; ++i) s(i, i) = (i + k) % 2 == 0 ? 1.0 : -1.0;
    const CMatrix t = u * s * u.adjoint();
    const KYExtraction e = extract_ky(PassiveSystem::validate(t, 2, true));
    const CMatrix& kk = e.param.K();
    const CMatrix& y = e.param.Y().matrix();
    EXPECT_LT(max_dev(kk.adjoint() * kk, identity(kk.cols())), 1e-8);
    EXPECT_LT(max_dev(y * y, identity(y.rows())), 1e-8);
  }
  const KYExtraction e = extract_ky(random_selfadjoint_system(rng, 2, 3));
  const CMatrix& kk = e.param.K();
  const bool iso = max_dev(kk.adjoint() * kk, identity(kk.cols())) < 1e-8;
  const CMatrix& y = e.param.Y().matrix();
  const bool inv = max_dev(y * y, identity(y.rows())) < 1e-8;
  EXPECT_FALSE(iso && inv);
}

TEST(NX, SwapAndStatelessExamples) {
  const NXExtraction e = extract_nx(PassiveSystem::validate(swap2(), 1, true));
  EXPECT_NEAR(e.param.D().matrix()(0, 0).real(), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(e.param.N()(0, 0)), 1.0, 1e-12);
  EXPECT_LT(max_abs(e.param.f_hat()), 1e-15);
  const NXExtraction s = extract_nx(PassiveSystem::validate(scalar(0.3), 1, true));
  EXPECT_EQ(s.param.N().size(), 0);
  EXPECT_EQ(s.param.X().dim(), 0);
}

TEST(NX, RoundTripAndLemmaW) {
  Rng rng(53);
  for (int k = 0; k < 100; ++k) {
    const PassiveSystem s = random_selfadjoint_system(rng, 1 + k % 3, 1 + k % 4);
    const NXExtraction e = extract_nx(s);
    EXPECT_LT(e.reassembly_residual, 1e-9);
    EXPECT_LT(max_dev(assemble_selfadjoint_nx(e.param).matrix(), s.matrix()), 1e-9);
    const CutPlanePoint z(cdouble(0, 0.3));
    const CMatrix w = lemma_w(e.param, z);
    EXPECT_LT(max_dev(w * lemma_w_inverse(e.param, z), identity(w.rows())), 1e-10);
  }
}

TEST(JF, Examples) {
  EXPECT_LT(max_dev(fundamental_jf(HermitianMatrix(scalar(0.0))), swap2()), 1e-15);
  const CMatrix j1 = fundamental_jf(HermitianMatrix(scalar(1.0)));
  ASSERT_EQ(j1.rows(), 1);
  EXPECT_NEAR(j1(0, 0).real(), 1.0, 1e-15);
  EXPECT_THROW(fundamental_jf(HermitianMatrix(scalar(1.2))), Error);
}

TEST(JF, RandomIsHermitianInvolution) {
  Rng rng(55);
  for (int k = 0; k < 50; ++k) {
    const CMatrix j = fundamental_jf(HermitianMatrix(random_selfadjoint_contraction(rng, 1 + k % 6)));
    EXPECT_LT(max_dev(j * j, identity(j.rows())), 1e-9);
    EXPECT_LT(max_dev(j, j.adjoint()), 1e-12);
  }
}

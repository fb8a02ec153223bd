#include <gtest/gtest.h>

#include <random>

#include "csim/classify.hpp"
#include "csim/generate.hpp"
#include "csim/moments.hpp"
#include "oracles.hpp"

using namespace csim;

namespace {
const cplx I(0.0, 1.0);

CMatrix mat2(cplx a, cplx b, cplx c, cplx d) {
  CMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

struct Disguised {
  Tridiagonal original;
  CMatrix a;
  CVector x0;
  Conjugation j;
};

// A = Q M Q^*, J = Q K Q^* with K coordinatewise conjugation, so C = Q Q^T.
Disguised disguise(const Tridiagonal& m, std::mt19937_64& rng) {
  const auto d = static_cast<Eigen::Index>(m.dim());
  const CMatrix q = oracle::random_unitary(rng, d);
  return {m, q * m.dense() * q.adjoint(), q.col(0), Conjugation(q * q.transpose())};
}

double relative_moment_gap(const Tridiagonal& x, const Tridiagonal& y, std::size_t rho) {
  const auto sx = spectral_moments<hp_complex>(x, rho);
  const auto sy = spectral_moments<hp_complex>(y, rho);
  double worst = 0.0;
  for (std::size_t k = 0; k <= rho; ++k) {
    const double scale = std::max(1.0, std::abs(to_cplx(sx[k])));
    worst = std::max(worst, std::abs(to_cplx(sx[k]) - to_cplx(sy[k])) / scale);
  }
  return worst;
}
}  // namespace

TEST(IsClassMatrix, MinimalMember) {
  const auto r = is_class_matrix(mat2(0.0, 1.0, 1.0, 0.0));
  ASSERT_TRUE(r.member);
  EXPECT_EQ(r.matrix->diag, (std::vector<cplx>{0.0, 0.0}));
  EXPECT_EQ(r.matrix->offdiag, (std::vector<cplx>{1.0}));
}

TEST(IsClassMatrix, RejectsAntisymmetric) {
  const auto r = is_class_matrix(mat2(0.0, 1.0, -1.0, 0.0));
  EXPECT_FALSE(r.member);
  EXPECT_EQ(r.violation, ClassViolation::symmetry);
}

TEST(IsClassMatrix, RejectsZeroOffDiagonal) {
  const auto r = is_class_matrix(mat2(1.0, 0.0, 0.0, 2.0));
  EXPECT_FALSE(r.member);
  EXPECT_EQ(r.violation, ClassViolation::zero_offdiagonal);
  EXPECT_EQ(r.row, 0u);
}

TEST(IsClassMatrix, RejectsWideBandAndReportsLocation) {
  CMatrix m = Tridiagonal({0.0, 0.0, 0.0}, {1.0, 1.0}).dense();
  m(0, 2) = m(2, 0) = 0.5;
  const auto r = is_class_matrix(m);
  EXPECT_EQ(r.violation, ClassViolation::bandwidth);
  EXPECT_EQ(r.row, 0u);
  EXPECT_EQ(r.col, 2u);
}

TEST(IsClassMatrix, ZeroOffDiagonalDiagnosticNamesIndex) {
  const auto r = is_class_matrix(Tridiagonal({1.0, 2.0, 3.0}, {1.0, 0.0}));
  EXPECT_FALSE(r.member);
  EXPECT_EQ(r.message(), "off-diagonal entry vanishes at k=1");
}

TEST(IsClassMatrix, DimensionOneIsInputError) {
  EXPECT_THROW(is_class_matrix(CMatrix::Identity(1, 1)), InputError);
}

TEST(VerifyJSymmetric, Examples) {
  const auto id = Conjugation::coordinatewise(2);
  EXPECT_EQ(verify_j_symmetric(mat2(1.0, 2.0, 2.0, 3.0), id), 0.0);
  EXPECT_EQ(verify_j_symmetric(mat2(I, 1.0, 1.0, -I), id), 0.0);
  EXPECT_EQ(verify_j_symmetric(mat2(0.0, 1.0, 0.0, 0.0), id), 1.0);
}

TEST(VerifyJSymmetric, DisguisedClassMembersAreJSymmetric) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = random_class_matrix(rng, 2 + trial % 5);
    const auto dis = disguise(m, rng);
    EXPECT_LE(verify_j_symmetric(dis.a, dis.j), 1e-12 * max_abs(dis.a));
  }
}

TEST(GramCondition, ChainPasses) {
  const auto rep = gram_condition_check(mat2(0.0, 1.0, 1.0, 0.0), unit_vector(2, 0), Conjugation::coordinatewise(2));
  ASSERT_EQ(rep.values.size(), 1u);
  EXPECT_TRUE(rep.passes);
  EXPECT_LE(std::abs(rep.values[0].gamma), 1e-15);
}

TEST(GramCondition, CyclicShiftFailsWithUnitDeterminant) {
  // A e0 = e1, A^T e0 = e2; Gamma(e0, e1, e2) = 1 by the Leibniz oracle.
  CMatrix a = CMatrix::Zero(3, 3);
  a(1, 0) = a(2, 1) = a(0, 2) = 1.0;
  const CVector x0 = unit_vector(3, 0);
  const auto rep = gram_condition_check(a, x0, Conjugation::coordinatewise(3));
  EXPECT_FALSE(rep.passes);
  const cplx expected = oracle::leibniz_det(oracle::gram_matrix({x0, a * x0, a.adjoint() * x0}));
  EXPECT_NEAR(std::abs(rep.values[0].gamma - expected), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(expected), 1.0, 1e-14);
}

TEST(GramCondition, PreconditionErrorsAreDistinct) {
  // x0 = e0 with A e0 = e0 is not cyclic.
  const CMatrix upper = mat2(1.0, 1.0, 0.0, 2.0);
  try {
    gram_condition_check(upper, unit_vector(2, 0), Conjugation::coordinatewise(2));
    FAIL() << "expected a precondition error";
  } catch (const PreconditionError& e) {
    EXPECT_EQ(e.hypothesis(), Hypothesis::cyclicity);
  }
  CVector x0(2);
  x0 << I, 0.0;
  try {
    gram_condition_check(mat2(0.0, 1.0, 1.0, 0.0), x0, Conjugation::coordinatewise(2));
    FAIL() << "expected a precondition error";
  } catch (const PreconditionError& e) {
    EXPECT_EQ(e.hypothesis(), Hypothesis::fixed_by_conjugation);
  }
}

TEST(GramCondition, NecessityForRandomClassMembers) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 40; ++trial) {
    const auto m = random_class_matrix(rng, 2 + trial % 7);
    const auto rep = gram_condition_check(m.dense(), unit_vector(m.dim(), 0), Conjugation::coordinatewise(m.dim()), 1e-8);
    EXPECT_TRUE(rep.passes) << "d=" << m.dim() << " max=" << rep.max_relative();
    EXPECT_EQ(rep.values.size(), m.dim() - 1);
  }
}

TEST(Cyclicity, ClassMembersAreCyclicFromFirstBasisVector) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 40; ++trial) {
    const auto m = random_class_matrix(rng, 2 + trial % 7);
    EXPECT_TRUE(is_cyclic(m.dense(), unit_vector(m.dim(), 0)));
  }
  EXPECT_FALSE(is_cyclic(CMatrix::Identity(3, 3), unit_vector(3, 0)));
}

TEST(Canonicalize, AlreadyCanonical) {
  const CMatrix a = mat2(0.0, 1.0, 1.0, 0.0);
  const auto f = canonicalize(a, unit_vector(2, 0), Conjugation::coordinatewise(2));
  EXPECT_LE(max_abs(f.basis - CMatrix::Identity(2, 2)), 1e-15);
  EXPECT_EQ(f.matrix, Tridiagonal({0.0, 0.0}, {1.0}));
  EXPECT_EQ(f.phases, (std::vector<double>{0.0, 0.0}));
}

TEST(Canonicalize, PhaseHalving) {
  // g_1 = i e_1, so J g_1 = -g_1, phi_1 = pi and u_1 = i g_1 = -e_1.
  const CMatrix a = mat2(0.0, I, I, 0.0);
  const auto j = Conjugation::coordinatewise(2);
  const auto f = canonicalize(a, unit_vector(2, 0), j);
  EXPECT_NEAR(f.phases[1], pi<double>(), 1e-15);
  EXPECT_LE((f.basis.col(1) - I * (I * unit_vector(2, 1))).norm(), 1e-15);
  EXPECT_LE((j.apply(f.basis.col(1)) - f.basis.col(1)).norm(), 1e-15);
  EXPECT_TRUE(is_class_matrix(f.matrix).member);
}

TEST(Canonicalize, RoundTripPreservesSpectralMoments) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    const auto m = random_class_matrix(rng, 2 + trial % 7);
    const auto dis = disguise(m, rng);
    const auto f = canonicalize(dis.a, dis.x0, dis.j);
    const auto d = static_cast<Eigen::Index>(m.dim());
    EXPECT_LE(max_abs(f.basis.adjoint() * f.basis - CMatrix::Identity(d, d)), 1e-10);
    for (Eigen::Index r = 0; r < d; ++r) EXPECT_LE((dis.j.apply(f.basis.col(r)) - f.basis.col(r)).norm(), 1e-9);
    EXPECT_LE(max_abs(f.basis.adjoint() * dis.a * f.basis - f.matrix.dense()), 1e-9 * max_abs(dis.a));
    EXPECT_LE(relative_moment_gap(m, f.matrix, 2 * m.dim() + 1), 1e-8) << "trial " << trial;
  }
}

TEST(Canonicalize, PreconditionFailuresNameHypothesis) {
  const auto id = Conjugation::coordinatewise(2);
  try {
    canonicalize(mat2(0.0, 1.0, 0.0, 0.0), unit_vector(2, 0), id);
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_EQ(e.hypothesis(), Hypothesis::j_symmetry);
  }
  try {
    canonicalize(mat2(1.0, 0.0, 0.0, 2.0), unit_vector(2, 0), id);
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_EQ(e.hypothesis(), Hypothesis::cyclicity);
  }
}

TEST(Canonicalize, GramConditionFailureIsReported) {
  // Complex symmetric (C = I) and cyclic from e0, but not tridiagonalizable
  // from e0: A^* e0 leaves span{e0, A e0}.
  CMatrix a(3, 3);
  a << 0.0, 1.0, I, 1.0, 0.0, 1.0, I, 1.0, 0.0;
  const auto j = Conjugation::coordinatewise(3);
  ASSERT_LE(verify_j_symmetric(a, j), 1e-15);
  const auto rep = gram_condition_check(a, unit_vector(3, 0), j);
  EXPECT_FALSE(rep.passes);
  try {
    canonicalize(a, unit_vector(3, 0), j);
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_EQ(e.hypothesis(), Hypothesis::gram_condition);
  }
}

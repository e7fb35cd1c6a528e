#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

#include "qme/lu.hpp"
#include "qme/mmatrix.hpp"
#include "test_util.hpp"

using qme::Matrix;
using qme::MKind;

namespace {

// Independent oracle: max |lambda| from a dense eigensolver.
double eigen_spectral_radius(const Matrix& a) {
  Eigen::MatrixXd m(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
  return m.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

TEST(SpectralRadius, Examples) {
  EXPECT_NEAR(qme::spectral_radius(Matrix::identity(2)), 1.0, 1e-12);
  EXPECT_NEAR(qme::spectral_radius(Matrix{{0, 1}, {1, 0}}), 1.0, 1e-12);
  EXPECT_NEAR(qme::spectral_radius(Matrix{{1, 1}, {1, 1}}), 2.0, 1e-12);
  EXPECT_EQ(qme::spectral_radius(Matrix::zeros(3)), 0.0);
}

TEST(SpectralRadius, UsesAbsoluteValues) {
  EXPECT_NEAR(qme::spectral_radius(Matrix{{-1, -1}, {-1, -1}}), 2.0, 1e-12);
}

TEST(SpectralRadius, PeriodicPatternConverges) {
  // tridiag(1, 0, 1): eigenvalues 2 cos(j pi / (n+1)), +-rho both present
  for (std::size_t n : {2u, 5u, 20u, 64u}) {
    const Matrix t = Matrix::tridiagonal(n, 1.0, 0.0, 1.0);
    EXPECT_NEAR(qme::spectral_radius(t), 2.0 * std::cos(M_PI / (n + 1.0)), 1e-8) << n;
  }
}

TEST(SpectralRadius, ReducibleMatrix) {
  EXPECT_NEAR(qme::spectral_radius(Matrix{{1, 5}, {0, 2}}), 2.0, 1e-9);
  EXPECT_NEAR(qme::spectral_radius(Matrix{{0, 1}, {0, 0}}), 0.0, 1e-9);
}

TEST(SpectralRadius, BudgetExhaustionThrows) {
  qme::PowerIterationOptions opt;
  opt.max_squarings = 2;
  EXPECT_THROW(qme::spectral_radius(Matrix{{1, 0.3, 0}, {0.2, 0.9, 0.1}, {0, 0.4, 0.95}}, opt),
               qme::NoConvergenceError);
}

TEST(SpectralRadius, AgreesWithEigenvalueOracleOnNonnegativeMatrices) {
  std::mt19937_64 rng(2);
  std::bernoulli_distribution zero(0.25);
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n = 1 + trial % 8;
    Matrix a = qme::testing::random_matrix(rng, n, n, 0.0, 3.0);
    for (double& x : a.values())
      if (zero(rng)) x = 0.0;
    const double oracle = eigen_spectral_radius(a);
    const double rho = qme::spectral_radius(a);
    EXPECT_NEAR(rho, oracle, 1e-8 * std::max(1.0, oracle)) << "trial " << trial;
  }
}

TEST(ClassifyM, Examples) {
  const auto ns = qme::classify_m(Matrix{{2, -1}, {-1, 2}});
  EXPECT_EQ(ns.kind, MKind::NonsingularM);
  EXPECT_NEAR(ns.s_minus_rho, 1.0, 1e-10);
  ASSERT_TRUE(ns.witness.has_value());
  EXPECT_NEAR((*ns.witness)[0], 1.0, 1e-15);  // A^{-1} 1 = (1, 1)

  const auto sing = qme::classify_m(Matrix{{1, -1}, {-1, 1}});
  EXPECT_EQ(sing.kind, MKind::SingularM);
  EXPECT_NEAR(sing.s_minus_rho, 0.0, 1e-10);
  EXPECT_FALSE(sing.witness.has_value());

  const auto notz = qme::classify_m(Matrix{{1, 1}, {0, 1}});
  EXPECT_EQ(notz.kind, MKind::NotZ);
  EXPECT_TRUE(std::isnan(notz.s_minus_rho));
}

TEST(ClassifyM, ZMatrixThatIsNotM) {
  const auto c = qme::classify_m(Matrix{{1, -2}, {-2, 1}});
  EXPECT_EQ(c.kind, MKind::NotM);
  EXPECT_NEAR(c.s_minus_rho, -1.0, 1e-10);
  EXPECT_FALSE(c.is_m());
}

TEST(ClassifyM, ZeroMatrixIsSingularM) {
  EXPECT_EQ(qme::classify_m(Matrix::zeros(3)).kind, MKind::SingularM);
}

TEST(ClassifyM, TinyPositiveOffDiagonalWithinTolerance) {
  EXPECT_EQ(qme::classify_m(Matrix{{2, 1e-14}, {-1, 2}}).kind, MKind::NonsingularM);
  EXPECT_EQ(qme::classify_m(Matrix{{2, 1e-6}, {-1, 2}}).kind, MKind::NotZ);
}

// Three characterizations of nonsingular M-matrices must agree on Z-matrices.
TEST(ClassifyM, EquivalentToInverseNonnegativityAndWitness) {
  std::mt19937_64 rng(31337);
  int nonsingular = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + trial % 7;
    const Matrix a = qme::testing::random_z_matrix(rng, n);
    const auto cls = qme::classify_m(a);

    bool inverse_nonneg = false;
    try {
      const Matrix inv = qme::inverse(a);
      inverse_nonneg = qme::is_entrywise(inv, qme::Relation::GE0, 1e-10 * qme::inf_norm(inv));
    } catch (const qme::SingularMatrixError&) {
    }
    bool witness_ok = false;
    if (cls.witness) {
      witness_ok = qme::is_entrywise(*cls.witness, qme::Relation::GT0, 0.0) &&
                   qme::is_entrywise(a * *cls.witness, qme::Relation::GT0, 0.0);
    }
    const bool is_nsm = cls.kind == MKind::NonsingularM;
    EXPECT_EQ(is_nsm, inverse_nonneg) << "trial " << trial;
    EXPECT_EQ(is_nsm, witness_ok) << "trial " << trial;
    nonsingular += is_nsm;
  }
  // the generator should exercise both outcomes
  EXPECT_GT(nonsingular, 100);
  EXPECT_LT(nonsingular, 400);
}

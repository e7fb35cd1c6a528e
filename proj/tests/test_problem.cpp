#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>

#include "qme/problem.hpp"
#include "qme/problem_io.hpp"
#include "test_util.hpp"

using qme::Matrix;
using qme::MKind;
using qme::ValidationReason;

namespace {

const double kScalarPhi = (-3.0 + std::sqrt(5.0)) / 2.0;

ValidationReason reason_of(const Matrix& b, const Matrix& c) {
  try {
    qme::validate(b, c);
  } catch (const qme::ValidationError& e) {
    return e.reason();
  }
  ADD_FAILURE() << "expected ValidationError";
  return ValidationReason::DimensionMismatch;
}

// Second implementation of NRes: elementwise loops, no Matrix arithmetic.
double nres_by_loops(const Matrix& b, const Matrix& c, const Matrix& x) {
  const std::size_t n = b.rows();
  auto norm = [n](auto entry) {
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < n; ++j) row += std::fabs(entry(i, j));
      best = std::max(best, row);
    }
    return best;
  };
  auto residual = [&](std::size_t i, std::size_t j) {
    double s = c(i, j);
    for (std::size_t k = 0; k < n; ++k) s += x(i, k) * x(k, j) + b(i, k) * x(k, j);
    return s;
  };
  const double xn = norm([&](std::size_t i, std::size_t j) { return x(i, j); });
  const double bn = norm([&](std::size_t i, std::size_t j) { return b(i, j); });
  const double cn = norm([&](std::size_t i, std::size_t j) { return c(i, j); });
  return norm(residual) / (xn * (xn + bn) + cn);
}

}  // namespace

TEST(Reduce, ScalarScaling) {
  const auto p = qme::reduce({2.0 * Matrix::identity(2), 6.0 * Matrix::identity(2),
                              2.0 * Matrix::identity(2)});
  EXPECT_EQ(p.b(), 3.0 * Matrix::identity(2));
  EXPECT_EQ(p.c(), Matrix::identity(2));
}

TEST(Reduce, IdentityScalingLeavesExampleUnchanged) {
  const auto ex = qme::gen_example1(30);
  const auto p = qme::reduce({Matrix::identity(30), ex.b(), ex.c()});
  EXPECT_EQ(p.b(), ex.b());
  EXPECT_EQ(p.c(), ex.c());
}

TEST(Reduce, RowDivisionByDiagonal) {
  const auto p = qme::reduce({Matrix{{1, 0}, {0, 2}}, Matrix{{4, -1}, {-2, 8}},
                              Matrix{{1, 0}, {0, 2}}});
  EXPECT_EQ(p.b(), (Matrix{{4, -1}, {-1, 4}}));
  EXPECT_EQ(p.c(), Matrix::identity(2));
}

TEST(Reduce, RejectsBadLeadingCoefficient) {
  const Matrix i2 = Matrix::identity(2);
  try {
    qme::reduce({Matrix{{1, 0.5}, {0, 1}}, 3.0 * i2, i2});
    FAIL();
  } catch (const qme::ValidationError& e) {
    EXPECT_EQ(e.reason(), ValidationReason::ATildeNotPositiveDiagonal);
  }
  EXPECT_THROW(qme::reduce({Matrix{{-1, 0}, {0, 1}}, 3.0 * i2, i2}), qme::ValidationError);
  EXPECT_THROW(qme::reduce({Matrix::identity(3), 3.0 * i2, i2}), qme::ValidationError);
}

TEST(Validate, SimpleValidProblemAndCertificate) {
  const auto p = qme::validate(3.0 * Matrix::identity(2), Matrix::identity(2));
  EXPECT_EQ(p.n(), 2u);
  EXPECT_NEAR(p.u()[0], 1.0, 1e-15);
  EXPECT_NEAR(p.u()[1], 1.0, 1e-15);
  EXPECT_EQ(p.v()[0], 1.0);
}

TEST(Validate, ReasonCodes) {
  const Matrix i2 = Matrix::identity(2);
  EXPECT_EQ(reason_of(2.0 * i2, i2), ValidationReason::Cond3Fails);
  EXPECT_EQ(reason_of(Matrix{{1, -2}, {-2, 1}}, i2), ValidationReason::BNotNonsingularM);
  EXPECT_EQ(reason_of(3.0 * i2, Matrix{{1, 1}, {0, 1}}), ValidationReason::CNotM);
  EXPECT_EQ(reason_of(Matrix{{2, -1}, {-1, 2}}, Matrix{{1, -1}, {-1, 1}}),
            ValidationReason::BinvCNotNonneg);
  EXPECT_EQ(reason_of(3.0 * i2, Matrix::identity(3)), ValidationReason::DimensionMismatch);
}

TEST(Validate, SingularMCoefficientAndZeroCAccepted) {
  EXPECT_NO_THROW(qme::validate(3.0 * Matrix::identity(2), Matrix{{1, 0}, {0, 0}}));
  EXPECT_NO_THROW(qme::validate(2.0 * Matrix::identity(3), Matrix::zeros(3)));
}

TEST(Generators, MinimalSizeInstantiation) {
  const auto c1 = qme::example1_coefficients(2);
  EXPECT_EQ(c1.b, (Matrix{{20, -10}, {-10, 20}}));
  EXPECT_EQ(c1.c, (Matrix{{15, -5}, {-5, 15}}));
  const auto p2 = qme::gen_example2(2);
  EXPECT_EQ(p2.b(), (Matrix{{4, -1}, {-1, 4}}));
  EXPECT_EQ(p2.c(), Matrix::identity(2));
  EXPECT_THROW(qme::gen_example1(1), qme::Error);
}

// B - C - I = [[4, -5], [-5, 4]] has eigenvalues 9 and -1.
TEST(Generators, FirstFamilyAtSizeTwoViolatesShiftCondition) {
  const auto c1 = qme::example1_coefficients(2);
  EXPECT_EQ(reason_of(c1.b, c1.c), ValidationReason::Cond3Fails);
}

TEST(Generators, PatternAtLargerSize) {
  const auto p = qme::gen_example1(30);
  EXPECT_EQ(p.b()(0, 0), 20.0);
  EXPECT_EQ(p.b()(29, 29), 20.0);
  EXPECT_EQ(p.b()(5, 5), 30.0);
  EXPECT_EQ(p.b()(5, 6), -10.0);
  EXPECT_EQ(p.b()(5, 7), 0.0);
  EXPECT_EQ(p.c()(0, 0), 15.0);
  EXPECT_EQ(p.c()(29, 28), -5.0);
}

// Both families satisfy the hypotheses at every size, and the certificate
// u > 0, (B - C - I) u > 0 holds.
TEST(Generators, HypothesesHoldForAllSizesUpTo200) {
  for (std::size_t n = 2; n <= 200; ++n) {
    for (int family : {1, 2}) {
      if (family == 1 && n == 2) continue;
      const auto p = family == 1 ? qme::gen_example1(n) : qme::gen_example2(n);
      const Matrix shifted = p.b() - p.c() - Matrix::identity(n);
      const double tol = 1e-12 * qme::inf_norm(p.b());
      EXPECT_TRUE(qme::is_entrywise(p.u(), qme::Relation::GT0, 0.0)) << family << " n=" << n;
      EXPECT_TRUE(qme::is_entrywise(shifted * p.u(), qme::Relation::GT0, tol))
          << family << " n=" << n;
    }
  }
}

TEST(Nres, Examples) {
  const auto scalar = qme::validate(Matrix{{3}}, Matrix{{1}});
  EXPECT_LE(qme::nres(scalar, Matrix{{kScalarPhi}}), 1e-15);

  const auto zero_c = qme::validate(2.0 * Matrix::identity(2), Matrix::zeros(2));
  EXPECT_EQ(qme::nres(zero_c, Matrix::zeros(2)), 0.0);

  const auto p = qme::validate(3.0 * Matrix::identity(2), Matrix::identity(2));
  EXPECT_EQ(qme::nres(p, Matrix::zeros(2)), 1.0);
  EXPECT_THROW(qme::nres(p, Matrix::zeros(3)), qme::DimensionMismatchError);
}

TEST(Nres, MatchesIndependentImplementation) {
  std::mt19937_64 rng(99);
  const auto p = qme::gen_example1(12);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix x = qme::testing::random_matrix(rng, 12, 12, -1.0, 0.0);
    const double a = qme::nres(p, x);
    const double b = nres_by_loops(p.b(), p.c(), x);
    EXPECT_NEAR(a, b, 4 * std::numeric_limits<double>::epsilon() * b);
  }
}

TEST(DualResidual, Examples) {
  const auto scalar = qme::validate(Matrix{{3}}, Matrix{{1}});
  // dual y^2 + 3y + 1 = 0 has the same root as the primal
  EXPECT_LE(qme::dual_residual(scalar, Matrix{{kScalarPhi}}), 1e-15);
  EXPECT_DOUBLE_EQ(qme::dual_residual(scalar, Matrix{{0}}), 1.0);
  EXPECT_NEAR(qme::dual_residual(scalar, Matrix{{-1.0 / 3.0}}), 1.0 / 19.0, 1e-16);
}

TEST(CheckSolvent, ScalarExactSolvent) {
  const auto p = qme::validate(Matrix{{3}}, Matrix{{1}});
  const auto chk = qme::check_solvent(p, Matrix{{kScalarPhi}});
  EXPECT_TRUE(chk.is_nonpositive);
  EXPECT_NEAR(chk.rho, 0.3819660112501051, 1e-12);
  EXPECT_EQ(chk.b_plus_phi_class.kind, MKind::NonsingularM);
  EXPECT_EQ(chk.b_plus_phi_minus_c_class.kind, MKind::NonsingularM);
  EXPECT_TRUE(chk.bound_ok);
  EXPECT_TRUE(chk.structure_ok());
}

TEST(CheckSolvent, ZeroSolventOfZeroC) {
  const auto p = qme::validate(2.0 * Matrix::identity(3), Matrix::zeros(3));
  const auto chk = qme::check_solvent(p, Matrix::zeros(3));
  EXPECT_EQ(chk.rho, 0.0);
  EXPECT_EQ(chk.residual_nres, 0.0);
  EXPECT_EQ(chk.b_plus_phi_class.kind, MKind::NonsingularM);
  EXPECT_TRUE(chk.structure_ok());
}

TEST(CheckSolvent, DetectsPositiveCandidate) {
  const auto p = qme::validate(Matrix{{3}}, Matrix{{1}});
  // the other root (-3 - sqrt 5)/2 is a solvent but not the maximal one
  const auto chk = qme::check_solvent(p, Matrix{{(-3.0 - std::sqrt(5.0)) / 2.0}});
  EXPECT_LE(chk.residual_nres, 1e-15);
  EXPECT_GT(chk.rho, 1.0);
  EXPECT_FALSE(chk.structure_ok());
  EXPECT_FALSE(qme::check_solvent(p, Matrix{{0.5}}).is_nonpositive);
}

// If X solves the reduced equation then it solves A X^2 + B X + C = 0.
TEST(Reduce, SolutionsTransferToGeneralEquation) {
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> scale(0.1, 10.0);
  const double eps = std::numeric_limits<double>::epsilon();
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 3 + trial % 5;
    const auto base = trial % 2 ? qme::gen_example1(n) : qme::gen_example2(n);
    std::vector<double> d(n);
    for (double& x : d) x = scale(rng);
    const Matrix a = Matrix::diagonal(d);
    const qme::GeneralQme g{a, a * base.b(), a * base.c()};
    const auto p = qme::reduce(g);

    // near-solvent of the reduced problem from fixed-point iteration
    Matrix x = Matrix::zeros(n);
    for (int it = 0; it < 3000; ++it) x = -qme::lu_solve(p.b(), x * x + p.c());
    const double scale_r = qme::inf_norm(x) * (qme::inf_norm(x) + qme::inf_norm(p.b())) +
                           qme::inf_norm(p.c());
    const double reduced = qme::inf_norm(x * x + p.b() * x + p.c());
    const double rel = reduced / (scale_r * eps);
    const double general_scale =
        qme::inf_norm(a) * (qme::inf_norm(x) * (qme::inf_norm(x) + qme::inf_norm(p.b())) +
                            qme::inf_norm(p.c()));
    const double general = qme::inf_norm(g.a_tilde * (x * x) + g.b_tilde * x + g.c_tilde);
    EXPECT_LE(general, n * std::max(rel, 1.0) * eps * general_scale) << "trial " << trial;
  }
}

TEST(ProblemFile, InlineMatrices) {
  const auto p = qme::parse_problem(R"({"B": [[3, 0], [0, 3]], "C": [[1, 0], [0, 1]]})");
  EXPECT_EQ(p.b(), 3.0 * Matrix::identity(2));
}

TEST(ProblemFile, PathsAndDiagonalLeadingCoefficient) {
  const auto dir = std::filesystem::temp_directory_path() / "qme_problem_file_test";
  std::filesystem::create_directories(dir);
  qme::save_matrix((dir / "b.txt").string(), Matrix{{4, -1}, {-2, 8}});
  {
    std::ofstream f(dir / "p.json");
    f << R"({"A_tilde": [1, 2], "B": "b.txt", "C": [[1, 0], [0, 2]]})";
  }
  const auto p = qme::load_problem(dir / "p.json");
  EXPECT_EQ(p.b(), (Matrix{{4, -1}, {-1, 4}}));
  EXPECT_EQ(p.c(), Matrix::identity(2));
  std::filesystem::remove_all(dir);
}

TEST(ProblemFile, Errors) {
  EXPECT_THROW(qme::parse_problem("{"), qme::ParseError);
  EXPECT_THROW(qme::parse_problem(R"({"B": [[1]]})"), qme::ParseError);
  EXPECT_THROW(qme::parse_problem(R"({"B": [[1, 2], [3]], "C": [[1]]})"), qme::ParseError);
  EXPECT_THROW(qme::parse_problem(R"({"B": "missing.txt", "C": [[1]]})"), qme::ParseError);
  try {
    qme::parse_problem(R"({"B": [[2, 0], [0, 2]], "C": [[1, 0], [0, 1]]})");
    FAIL();
  } catch (const qme::ValidationError& e) {
    EXPECT_EQ(e.reason(), ValidationReason::Cond3Fails);
  }
}

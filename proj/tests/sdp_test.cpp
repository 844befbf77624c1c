#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include "support/fixtures.hpp"

namespace rbc {
namespace {

TEST(AffineExpr, EvaluatesLinearCombinations) {
  SdpProblem p;
  const AffineExpr x = p.add_scalar("x");
  const AffineExpr s = p.add_symmetric(2, "S");
  ASSERT_EQ(p.num_variables(), 4);
  Vector y(4);
  y << 2.0, 1.0, 3.0, 5.0;  // x, then S(0,0), S(0,1)=S(1,0), S(1,1)
  EXPECT_DOUBLE_EQ(x.evaluate_scalar(y), 2.0);
  Matrix expected(2, 2);
  expected << 1, 3, 3, 5;
  EXPECT_EQ(s.evaluate(y), expected);

  Matrix m(2, 2);
  m << 0, 1, -2, 0;
  const AffineExpr lyap = m * s + s * Matrix(m.transpose()) + 2.0 * s;
  EXPECT_TRUE(lyap.evaluate(y).isApprox(m * expected + expected * m.transpose() + 2.0 * expected));

  const AffineExpr block = AffineExpr::blocks({{x, AffineExpr::constant(Matrix::Ones(1, 2))},
                                               {AffineExpr::constant(Matrix::Ones(2, 1)), s}});
  EXPECT_EQ(block.rows(), 3);
  EXPECT_DOUBLE_EQ(block.evaluate(y)(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(block.evaluate(y)(2, 2), 5.0);
  EXPECT_EQ((x - x).evaluate(y), Matrix::Zero(1, 1));
}

TEST(SolveSdp, ScalarLowerBound) {
  SdpProblem p;
  const AffineExpr t = p.add_scalar("t");
  p.add_psd(t - AffineExpr::constant(1.0));
  p.minimize(t);
  const auto sol = solve_sdp(p);
  ASSERT_EQ(sol.report.status, SolveStatus::kOptimal);
  EXPECT_NEAR(t.evaluate_scalar(sol.values), 1.0, 1e-7);
  EXPECT_NEAR(sol.report.objective, 1.0, 1e-7);
}

TEST(SolveSdp, ScalarDecayIsFeasibleForStableSystem) {
  SdpProblem p;
  const AffineExpr q = p.add_symmetric(1, "Q");
  p.add_psd(q - AffineExpr::constant(kStrictnessMargin));
  p.add_nsd(-2.0 * q + 2.0 * 0.5 * q);
  const auto sol = solve_sdp(p);
  ASSERT_EQ(sol.report.status, SolveStatus::kOptimal);
  EXPECT_GT(q.evaluate_scalar(sol.values), 0.0);
  EXPECT_LE(sol.report.max_constraint_residual, 1e-7);
}

TEST(SolveSdp, ScalarDecayIsInfeasibleForUnstableSystem) {
  SdpProblem p;
  const AffineExpr q = p.add_symmetric(1, "Q");
  p.add_psd(q - AffineExpr::constant(kStrictnessMargin));
  p.add_nsd(2.0 * q + 2.0 * 0.5 * q);
  const auto sol = solve_sdp(p);
  EXPECT_EQ(sol.report.status, SolveStatus::kInfeasible);
  EXPECT_EQ(sol.values.size(), 0);
}

TEST(SolveSdp, SchurComplementOptimum) {
  // min x + y s.t. [[x, 1], [1, y]] >= 0 has optimum x = y = 1.
  SdpProblem p;
  const AffineExpr x = p.add_scalar();
  const AffineExpr y = p.add_scalar();
  const AffineExpr one = AffineExpr::constant(1.0);
  p.add_psd(AffineExpr::blocks({{x, one}, {one, y}}));
  p.minimize(x + y);
  const auto sol = solve_sdp(p);
  ASSERT_EQ(sol.report.status, SolveStatus::kOptimal);
  EXPECT_NEAR(sol.report.objective, 2.0, 1e-7);
  EXPECT_NEAR(x.evaluate_scalar(sol.values), 1.0, 1e-4);
}

TEST(SolveSdp, SmallestEigenvalueOracle) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::Index n = 2 + trial % 4;
    Matrix c = testing::random_vector(rng, n * n).reshaped(n, n);
    c = 0.5 * (c + c.transpose()).eval();
    SdpProblem p;
    const AffineExpr t = p.add_scalar();
    p.add_psd(AffineExpr::constant(c) - AffineExpr::variable(0, Matrix::Identity(n, n)));
    p.maximize(t);
    const auto sol = solve_sdp(p);
    ASSERT_EQ(sol.report.status, SolveStatus::kOptimal);
    const double lambda_min = Eigen::SelfAdjointEigenSolver<Matrix>(c).eigenvalues()(0);
    EXPECT_NEAR(t.evaluate_scalar(sol.values), lambda_min, 1e-7) << "trial " << trial;
  }
}

TEST(SolveSdp, OptimalPointsRespectTheResidualTolerance) {
  const auto& design = testing::exoskeleton_design();
  for (const auto& q : design.certificate.q_list) {
    SdpProblem p;
    const AffineExpr t = p.add_scalar();
    p.add_psd(AffineExpr::constant(q) - AffineExpr::variable(0, Matrix::Identity(2, 2)));
    p.maximize(t);
    const auto sol = solve_sdp(p);
    ASSERT_EQ(sol.report.status, SolveStatus::kOptimal);
    EXPECT_LE(max_constraint_residual(p, sol.values), 1e-7);
    EXPECT_DOUBLE_EQ(max_constraint_residual(p, sol.values), sol.report.max_constraint_residual);
  }
}

TEST(SolveSdp, IsDeterministic) {
  const auto build = [] {
    SdpProblem p;
    const AffineExpr s = p.add_symmetric(3);
    const AffineExpr r = p.add_scalar();
    Matrix a(3, 3);
    a << -1, 1, 0, 0, -2, 1, -1, 0, -3;
    p.add_psd(s - AffineExpr::constant(Matrix::Identity(3, 3) * 1e-3));
    p.add_nsd(a * s + s * Matrix(a.transpose()) + 0.5 * s);
    p.add_le(AffineExpr::variable(0, Matrix::Ones(1, 1)), AffineExpr::constant(1.0));
    p.add_psd(AffineExpr::blocks({{r, AffineExpr::constant(Matrix::Ones(1, 3))},
                                  {AffineExpr::constant(Matrix::Ones(3, 1)), s}}));
    p.minimize(r);
    return p;
  };
  const auto first = solve_sdp(build());
  const auto second = solve_sdp(build());
  ASSERT_EQ(first.report.status, SolveStatus::kOptimal);
  EXPECT_EQ(first.values, second.values);
  EXPECT_EQ(first.report.newton_steps, second.report.newton_steps);
}

}  // namespace
}  // namespace rbc

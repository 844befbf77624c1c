#include <gtest/gtest.h>

#include "support/fixtures.hpp"

namespace rbc {
namespace {

using testing::exoskeleton_constraints;
using testing::exoskeleton_design;
using testing::exoskeleton_directions;
using testing::exoskeleton_plant;

Matrix mat1(double v) { return Matrix::Constant(1, 1, v); }

// Largest decay rate reachable by any companion A0 with |a_hat_i| <= R,
// solved directly as one SDP in (a_hat, beta): the decay LMI is jointly
// linear in both for fixed Q_j.
double direct_max_alpha(const std::vector<Matrix>& q_list, double trust_radius) {
  const Eigen::Index n = q_list.front().rows();
  SdpProblem p;
  const AffineExpr beta = p.add_scalar("beta");  // variable 0
  AffineExpr a0 = AffineExpr::constant(shift_matrix(static_cast<std::size_t>(n)));
  for (Eigen::Index i = 0; i < n; ++i) {
    const AffineExpr c = p.add_scalar();
    a0 -= Matrix(Vector::Unit(n, i)) * c * Matrix(output_row(static_cast<std::size_t>(n)));
    p.add_le(c, AffineExpr::constant(trust_radius));
    p.add_le(AffineExpr::constant(-trust_radius), c);
  }
  p.add_le(beta, AffineExpr::constant(1e3));
  for (const auto& q : q_list) {
    p.add_nsd(a0 * q + q * a0.transpose() + AffineExpr::variable(0, 2.0 * q));
  }
  p.maximize(beta);
  const auto sol = solve_sdp(p);
  EXPECT_EQ(sol.report.status, SolveStatus::kOptimal);
  return beta.evaluate_scalar(sol.values);
}

TEST(CheckDecay, ClosedFormCases) {
  const Matrix identity = Matrix::Identity(2, 2);
  EXPECT_NEAR(check_decay(-identity, identity, 1.0), 0.0, 1e-15);
  EXPECT_NEAR(check_decay(-identity, identity, 0.5), -1.0, 1e-15);
  Matrix rotation(2, 2);
  rotation << 0, 1, -1, 0;
  EXPECT_NEAR(check_decay(rotation, identity, 0.1), 0.2, 1e-15);
}

TEST(SynthesizeQ, ScalarAnalyticSolution) {
  ConstraintSet c;
  c.f.push_back(RowVector::Ones(1));
  c.u_max = 10.0;
  c.gain = 1.0;
  const std::vector<Matrix> vertices{mat1(-1.0)};
  const auto result = synthesize_q(vertices, c, 0.5, Vector::Ones(1));
  EXPECT_NEAR(result.Q(0, 0), 1.0, 1e-6);
  EXPECT_NEAR(result.rho, 1.0, 1e-6);
  EXPECT_EQ(result.report.status, SolveStatus::kOptimal);
}

TEST(SynthesizeQ, ExoskeletonCertificateSatisfiesEveryCondition) {
  const auto& d = exoskeleton_design();
  const auto vertices = pldi_vertices(d.plant, d.constraints.gain);
  const RowVector c0 = output_row(2);
  ASSERT_EQ(d.certificate.q_list.size(), 2u);
  for (std::size_t j = 0; j < d.certificate.q_list.size(); ++j) {
    const Matrix& q = d.certificate.q_list[j];
    EXPECT_GT(Eigen::SelfAdjointEigenSolver<Matrix>(q).eigenvalues()(0), 0.0);
    EXPECT_LE((d.constraints.f[0] * q * d.constraints.f[0].transpose())(0, 0), 1.0 + 1e-8);
    EXPECT_LE((c0 * q * c0.transpose())(0, 0), d.constraints.output_bound_squared() + 1e-8);
    for (const auto& a : vertices) EXPECT_LE(check_decay(a, q, 0.5), 1e-8);
    const Vector& x = d.certificate.directions[j];
    EXPECT_NEAR(x.dot(q.ldlt().solve(x)), d.certificate.rho[j], 1e-7);
  }
}

TEST(SynthesizeQ, ExoskeletonWidthIsLocallyOptimal) {
  // Convex problem: no feasible perturbation of the optimum may shrink rho.
  const auto& d = exoskeleton_design();
  const auto vertices = pldi_vertices(d.plant, d.constraints.gain);
  const RowVector c0 = output_row(2);
  std::mt19937_64 rng(5);
  for (std::size_t j = 0; j < d.certificate.q_list.size(); ++j) {
    const Matrix& q_star = d.certificate.q_list[j];
    const Vector& x = d.certificate.directions[j];
    const double rho_star = d.certificate.rho[j];
    int feasible = 0;
    for (int trial = 0; trial < 20000; ++trial) {
      const double scale = 1e-3 * std::pow(10.0, -3.0 * (trial % 4) / 3.0) * q_star.norm();
      Matrix e = testing::random_vector(rng, 4, scale).reshaped(2, 2);
      const Matrix q = q_star + 0.5 * (e + e.transpose());
      if ((d.constraints.f[0] * q * d.constraints.f[0].transpose())(0, 0) > 1.0) continue;
      if ((c0 * q * c0.transpose())(0, 0) > d.constraints.output_bound_squared()) continue;
      if (Eigen::SelfAdjointEigenSolver<Matrix>(q).eigenvalues()(0) <= kStrictnessMargin) continue;
      bool decays = true;
      for (const auto& a : vertices) decays = decays && check_decay(a, q, 0.5) <= 0.0;
      if (!decays) continue;
      ++feasible;
      EXPECT_GE(x.dot(q.ldlt().solve(x)), rho_star - 1e-7);
    }
    EXPECT_GT(feasible, 0);
  }
}

TEST(SynthesizeQ, ExoskeletonMatchesIndependentSolverReference) {
  // Optimum of the same program computed with an independent interior-point
  // conic solver.
  const auto& d = exoskeleton_design();
  Matrix q1(2, 2), q2(2, 2);
  q1 << 1.0, 0.680876, 0.680876, 10.3567;
  q2 << 1.0, 11.3191, 11.3191, 138.0156;
  EXPECT_LE((d.certificate.q_list[0] - q1).cwiseAbs().maxCoeff(), 1e-3);
  EXPECT_LE((d.certificate.q_list[1] - q2).cwiseAbs().maxCoeff(), 2e-3);
  EXPECT_NEAR(d.certificate.rho[0], 1.04686032, 1e-6);
  EXPECT_NEAR(d.certificate.rho[1], 1.04686032, 1e-6);
}

TEST(SynthesizeQ, DestabilizingGainIsInfeasible) {
  const auto plant = exoskeleton_plant();
  auto constraints = exoskeleton_constraints();
  constraints.gain = 2.0;
  const auto vertices = pldi_vertices(plant, constraints.gain);
  // Constant term of the closed-loop characteristic polynomial is k_h - 2 k_h < 0.
  EXPECT_FALSE(is_strictly_stable(vertices[0]));
  try {
    synthesize_q(vertices, constraints, 0.5, Vector::Unit(2, 0));
    FAIL() << "expected infeasibility";
  } catch (const SynthesisInfeasibleError& e) {
    EXPECT_NE(std::string(e.what()).find("synthesis infeasible"), std::string::npos);
    EXPECT_EQ(e.report().status, SolveStatus::kInfeasible);
  }
}

TEST(SynthesizeQ, RejectsBadArguments) {
  const std::vector<Matrix> vertices{mat1(-1.0)};
  ConstraintSet c;
  EXPECT_THROW(synthesize_q(vertices, c, 0.0, Vector::Ones(1)), InvalidArgumentError);
  EXPECT_THROW(synthesize_q(vertices, c, 0.5, Vector::Zero(1)), InvalidArgumentError);
  EXPECT_THROW(synthesize_q({}, c, 0.5, Vector::Ones(1)), InvalidArgumentError);
}

TEST(SynthesizeA0, ScalarCaseSaturatesAtTrustRadius) {
  const std::vector<Matrix> q_list{mat1(1.0)};
  const auto design = synthesize_a0(q_list, 1.0, 10.0, 1e-4, 5.0);
  EXPECT_FALSE(design.saturated);
  EXPECT_NEAR(design.alpha, 5.0, 1e-4);
  EXPECT_LE(design.alpha, 5.0);
  EXPECT_NEAR(design.a_hat(0), 5.0, 1e-3);
}

TEST(SynthesizeA0, ExoskeletonRateAndCoefficients) {
  const auto& d = exoskeleton_design();
  const auto& e = d.estimator;
  EXPECT_GE(e.alpha, 0.5);
  EXPECT_GE(e.alpha, 0.55);
  EXPECT_LE(e.alpha, 0.85);
  EXPECT_FALSE(e.saturated);
  EXPECT_TRUE(is_strictly_stable(e.A0));
  EXPECT_LE(e.a_hat.cwiseAbs().maxCoeff(), 100.0);
  for (const auto& q : d.certificate.q_list) EXPECT_LE(check_decay(e.A0, q, e.alpha), 1e-7);
}

TEST(SynthesizeA0, BisectionMatchesDirectOptimum) {
  const auto& d = exoskeleton_design();
  const double beta = direct_max_alpha(d.certificate.q_list, 100.0);
  EXPECT_LE(d.estimator.alpha, beta + 1e-6);
  EXPECT_GE(d.estimator.alpha, beta - 2e-4);
}

TEST(SynthesizeA0, OutputSitsOnTheFeasibilityBoundary) {
  const auto& d = exoskeleton_design();
  const double tol = 1e-4;
  EXPECT_NE(find_estimator_coefficients(d.certificate.q_list, d.estimator.alpha, 100.0).size(), 0);
  EXPECT_EQ(find_estimator_coefficients(d.certificate.q_list, d.estimator.alpha + 2 * tol, 100.0)
                .size(),
            0);
}

TEST(SynthesizeA0, InvariantUnderScalingOfQ) {
  const auto& d = exoskeleton_design();
  for (double s : {1e-2, 7.5}) {
    std::vector<Matrix> scaled;
    for (const auto& q : d.certificate.q_list) scaled.push_back(s * q);
    const auto design = synthesize_a0(scaled, 0.5, 10.0);
    EXPECT_NEAR(design.alpha, d.estimator.alpha, 2e-4) << "scale " << s;
  }
}

TEST(SynthesizeA0, EveryVertexMatrixCertifiesAlpha0) {
  const auto& d = exoskeleton_design();
  for (const auto& a : pldi_vertices(d.plant, d.constraints.gain)) {
    for (const auto& q : d.certificate.q_list) EXPECT_LE(check_decay(a, q, 0.5), 1e-8);
  }
}

TEST(SynthesizeA0, SaturationAndContractViolation) {
  const std::vector<Matrix> q_list{mat1(1.0)};
  const auto saturated = synthesize_a0(q_list, 0.5, 2.0, 1e-4, 5.0);
  EXPECT_TRUE(saturated.saturated);
  EXPECT_DOUBLE_EQ(saturated.alpha, 2.0);
  EXPECT_THROW(synthesize_a0(q_list, 6.0, 8.0, 1e-4, 5.0), ContractViolationError);
  EXPECT_THROW(synthesize_a0(q_list, 1.0, 0.5), InvalidArgumentError);
}

TEST(SynthesizeCertificate, OneMatrixPerDirection) {
  const auto& d = exoskeleton_design();
  EXPECT_EQ(d.certificate.q_list.size(), exoskeleton_directions().size());
  EXPECT_EQ(d.certificate.gain, -1.2);
  EXPECT_EQ(d.certificate.alpha0, 0.5);
  const auto unit = unit_ball_constraint_check(CompositeNorm(d.certificate.q_list), d.constraints);
  EXPECT_TRUE(unit.ok);
}

}  // namespace
}  // namespace rbc

#include "rbc/synthesis.hpp"

#include <cmath>
#include <string>

namespace rbc {

double check_decay(const Matrix& A, const Matrix& Q, double alpha) {
  const Matrix lhs = A * Q + Q * A.transpose() + 2.0 * alpha * Q;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (lhs + lhs.transpose()),
                                               Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(solver.eigenvalues().size() - 1);
}

EllipsoidSynthesis synthesize_q(std::span<const Matrix> vertices, const ConstraintSet& constraints,
                                double alpha0, const Vector& direction,
                                const SynthesisOptions& options) {
  if (!(alpha0 > 0.0)) throw InvalidArgumentError("alpha0 must be positive");
  if (vertices.empty()) throw InvalidArgumentError("at least one closed-loop vertex is required");
  const Eigen::Index n = vertices.front().rows();
  if (direction.size() != n) throw InvalidArgumentError("direction has the wrong dimension");
  if (direction.cwiseAbs().maxCoeff() == 0.0) {
    throw InvalidArgumentError("direction must be nonzero");
  }

  SdpProblem problem;
  const AffineExpr Q = problem.add_symmetric(n, "Q");
  const AffineExpr rho = problem.add_scalar("rho");
  const Matrix identity = Matrix::Identity(n, n);

  problem.add_psd(Q - AffineExpr::constant(options.strictness_margin * identity), "Q > 0");
  for (std::size_t i = 0; i < constraints.f.size(); ++i) {
    const RowVector& f = constraints.f[i];
    if (f.size() != n) throw InvalidArgumentError("state constraint row has the wrong dimension");
    problem.add_le(Matrix(f) * Q * Matrix(f.transpose()), AffineExpr::constant(1.0),
                   "state limit " + std::to_string(i + 1));
  }
  const double output_bound = constraints.output_bound_squared();
  if (std::isfinite(output_bound)) {
    const RowVector c0 = output_row(static_cast<std::size_t>(n));
    problem.add_le(Matrix(c0) * Q * Matrix(c0.transpose()), AffineExpr::constant(output_bound),
                   "input limit");
  }
  problem.add_psd(AffineExpr::blocks({{rho, AffineExpr::constant(Matrix(direction.transpose()))},
                                      {AffineExpr::constant(Matrix(direction)), Q}}),
                  "width");
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const Matrix& A = vertices[i];
    problem.add_nsd(A * Q + Q * Matrix(A.transpose()) + 2.0 * alpha0 * Q,
                    "decay at vertex " + std::to_string(i + 1));
  }
  problem.minimize(rho);

  const SdpSolution solution = solve_sdp(problem, options.solver);
  if (solution.report.status != SolveStatus::kOptimal) {
    throw SynthesisInfeasibleError(
        std::string("synthesis infeasible: Q synthesis returned ") +
            to_string(solution.report.status) +
            (solution.report.message.empty() ? "" : " (" + solution.report.message + ")"),
        solution.report);
  }
  EllipsoidSynthesis out;
  out.Q = Q.evaluate(solution.values);
  out.Q = 0.5 * (out.Q + out.Q.transpose());
  out.rho = rho.evaluate_scalar(solution.values);
  out.report = solution.report;
  return out;
}

BarrierCertificate synthesize_certificate(std::span<const Matrix> vertices,
                                          const ConstraintSet& constraints, double alpha0,
                                          std::span<const Vector> directions,
                                          const SynthesisOptions& options) {
  if (directions.empty()) throw InvalidArgumentError("at least one direction is required");
  BarrierCertificate certificate;
  certificate.gain = constraints.gain;
  certificate.alpha0 = alpha0;
  certificate.constraints = constraints;
  for (const Vector& direction : directions) {
    auto result = synthesize_q(vertices, constraints, alpha0, direction, options);
    certificate.q_list.push_back(std::move(result.Q));
    certificate.rho.push_back(result.rho);
    certificate.directions.push_back(direction);
  }
  return certificate;
}

Vector find_estimator_coefficients(std::span<const Matrix> q_list, double alpha,
                                   double trust_radius, const SolverOptions& solver) {
  if (q_list.empty()) throw InvalidArgumentError("Q list is empty");
  const Eigen::Index n = q_list.front().rows();
  SdpProblem problem;
  // A0 = S - a_hat c0, affine in a_hat.
  const Matrix shift = shift_matrix(static_cast<std::size_t>(n));
  const RowVector c0 = output_row(static_cast<std::size_t>(n));
  AffineExpr a0 = AffineExpr::constant(shift);
  for (Eigen::Index i = 0; i < n; ++i) {
    const AffineExpr coefficient = problem.add_scalar("a_hat" + std::to_string(i + 1));
    const Matrix unit = Vector::Unit(n, i);
    a0 -= unit * coefficient * Matrix(c0);
    problem.add_le(coefficient, AffineExpr::constant(trust_radius));
    problem.add_le(AffineExpr::constant(-trust_radius), coefficient);
  }
  for (const Matrix& Q : q_list) {
    problem.add_nsd(a0 * Q + Q * a0.transpose() + AffineExpr::constant(2.0 * alpha * Q));
  }
  const SdpSolution solution = solve_sdp(problem, solver);
  if (solution.report.status != SolveStatus::kOptimal) return {};
  return solution.values;
}

EstimatorDesign synthesize_a0(std::span<const Matrix> q_list, double alpha_lo, double alpha_hi,
                              double bisect_tol, double trust_radius,
                              const SolverOptions& solver) {
  if (!(alpha_hi > alpha_lo)) throw InvalidArgumentError("alpha_hi must exceed alpha_lo");
  if (!(bisect_tol > 0.0)) throw InvalidArgumentError("bisection tolerance must be positive");
  if (!(trust_radius > 0.0)) throw InvalidArgumentError("trust radius must be positive");

  Vector best = find_estimator_coefficients(q_list, alpha_lo, trust_radius, solver);
  if (best.size() == 0) {
    throw ContractViolationError(
        "no estimator reaches the lower decay rate; the Q list does not certify alpha_lo");
  }
  EstimatorDesign design;
  double lo = alpha_lo;
  double hi = alpha_hi;
  if (Vector top = find_estimator_coefficients(q_list, alpha_hi, trust_radius, solver);
      top.size() != 0) {
    design.saturated = true;
    lo = alpha_hi;
    best = std::move(top);
  } else {
    while (hi - lo > bisect_tol) {
      const double mid = 0.5 * (lo + hi);
      Vector candidate = find_estimator_coefficients(q_list, mid, trust_radius, solver);
      ++design.bisection_steps;
      if (candidate.size() != 0) {
        lo = mid;
        best = std::move(candidate);
      } else {
        hi = mid;
      }
    }
  }
  design.alpha = lo;
  design.a_hat = best;
  design.A0 = observable_canonical(best, Vector::Zero(best.size())).A;
  if (!is_strictly_stable(design.A0)) {
    throw InstabilityError("synthesized A0 is not strictly stable");
  }
  return design;
}

}  // namespace rbc

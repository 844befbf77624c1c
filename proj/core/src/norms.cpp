#include "rbc/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rbc/sdp.hpp"

namespace rbc {

namespace {

constexpr double kSymmetryTolerance = 1e-9;

// x^T Q^{-1} x, or +inf when Q is not positive definite.
double inverse_quadratic_form(const Matrix& q, const Vector& x) {
  Eigen::LLT<Matrix> llt(q);
  if (llt.info() != Eigen::Success) return std::numeric_limits<double>::infinity();
  const Vector z = llt.matrixL().solve(x);
  return z.squaredNorm();
}

}  // namespace

QuadraticNorm::QuadraticNorm(Matrix q) : q_(std::move(q)) {
  if (q_.rows() == 0 || q_.rows() != q_.cols()) {
    throw InvalidArgumentError("norm matrix must be square and non-empty");
  }
  const double scale = std::max(1.0, q_.cwiseAbs().maxCoeff());
  if ((q_ - q_.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance * scale) {
    throw InvalidArgumentError("norm matrix must be symmetric");
  }
  q_ = 0.5 * (q_ + q_.transpose());
  llt_.compute(q_);
  if (llt_.info() != Eigen::Success || !(llt_.matrixLLT().diagonal().minCoeff() > 0.0)) {
    throw InvalidArgumentError("norm matrix must be positive definite");
  }
}

double QuadraticNorm::operator()(const Vector& x) const {
  if (x.size() != q_.rows()) throw InvalidArgumentError("vector has the wrong dimension");
  return llt_.matrixL().solve(x).norm();
}

CompositeNorm::CompositeNorm(std::vector<Matrix> q_list) {
  if (q_list.empty()) throw InvalidArgumentError("composite norm needs at least one matrix");
  for (auto& q : q_list) {
    members_.emplace_back(std::move(q));
    if (members_.back().dimension() != members_.front().dimension()) {
      throw InvalidArgumentError("composite norm matrices differ in size");
    }
  }
}

std::vector<Matrix> CompositeNorm::q_list() const {
  std::vector<Matrix> out;
  for (const auto& m : members_) out.push_back(m.matrix());
  return out;
}

CompositeNormValue CompositeNorm::evaluate(const Vector& x, CompositeMethod method) const {
  if (x.size() != dimension()) throw InvalidArgumentError("vector has the wrong dimension");
  const auto nq = static_cast<Eigen::Index>(members_.size());
  const double scale = x.norm();
  if (scale == 0.0) {
    return {0.0, {Vector::Constant(nq, 1.0 / static_cast<double>(nq))}};
  }
  if (nq == 1) return {members_.front()(x), {Vector::Ones(1)}};

  // The norm is absolutely homogeneous; evaluate on the unit sphere.
  const Vector unit = x / scale;
  const bool golden = method == CompositeMethod::kGoldenSection ||
                      (method == CompositeMethod::kAuto && nq == 2);
  if (golden && nq != 2) {
    throw InvalidArgumentError("golden-section evaluation supports exactly two matrices");
  }
  CompositeNormValue out = golden ? evaluate_golden(unit) : evaluate_sdp(unit);
  out.value *= scale;
  return out;
}

CompositeNormValue CompositeNorm::evaluate_golden(const Vector& unit) const {
  const Matrix& q1 = members_[0].matrix();
  const Matrix& q2 = members_[1].matrix();
  // Convex in g: the matrix-fractional function composed with an affine map.
  const auto objective = [&](double g) { return inverse_quadratic_form(g * q1 + (1.0 - g) * q2, unit); };

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0;
  double hi = 1.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double f1 = objective(x1);
  double f2 = objective(x2);
  while (hi - lo > 1e-13) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = objective(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = objective(x2);
    }
  }
  double best_g = x1;
  double best_f = f1;
  for (const auto& [g, f] : {std::pair{x2, f2}, std::pair{0.0, objective(0.0)},
                             std::pair{1.0, objective(1.0)}}) {
    if (f < best_f) {
      best_f = f;
      best_g = g;
    }
  }
  Vector gamma(2);
  gamma << best_g, 1.0 - best_g;
  return {std::sqrt(best_f), {gamma}};
}

CompositeNormValue CompositeNorm::evaluate_sdp(const Vector& unit) const {
  const auto n = dimension();
  const std::size_t nq = members_.size();
  SdpProblem problem;
  const AffineExpr t = problem.add_scalar("t");
  // gamma_nq = 1 - sum of the others.
  AffineExpr q_of_gamma = AffineExpr::constant(members_.back().matrix());
  AffineExpr gamma_sum = AffineExpr::constant(0.0);
  for (std::size_t j = 0; j + 1 < nq; ++j) {
    const AffineExpr gamma = problem.add_scalar("gamma" + std::to_string(j + 1));
    const Matrix delta = members_[j].matrix() - members_.back().matrix();
    q_of_gamma += AffineExpr::variable(static_cast<int>(j + 1), delta);
    problem.add_psd(gamma, "gamma >= 0");
    gamma_sum += gamma;
  }
  problem.add_le(gamma_sum, AffineExpr::constant(1.0), "gamma sum");
  problem.add_psd(AffineExpr::blocks({{t, AffineExpr::constant(Matrix(unit.transpose()))},
                                      {AffineExpr::constant(Matrix(unit)), q_of_gamma}}),
                  "schur");
  problem.minimize(t);

  SolverOptions options;
  options.gap_tolerance = 1e-13;
  const SdpSolution solution = solve_sdp(problem, options);
  if (solution.report.status != SolveStatus::kOptimal) {
    throw Error(std::string("composite norm SDP failed: ") + to_string(solution.report.status));
  }

  // Project the witness onto the simplex and evaluate the quadratic form
  // exactly; any simplex point gives an upper bound no larger than t.
  Vector gamma(static_cast<Eigen::Index>(nq));
  double last = 1.0;
  for (std::size_t j = 0; j + 1 < nq; ++j) {
    const double g = std::max(0.0, solution.values(static_cast<Eigen::Index>(j + 1)));
    gamma(static_cast<Eigen::Index>(j)) = g;
    last -= g;
  }
  gamma(static_cast<Eigen::Index>(nq - 1)) = std::max(0.0, last);
  gamma /= gamma.sum();
  Matrix q = Matrix::Zero(n, n);
  for (std::size_t j = 0; j < nq; ++j) q += gamma(static_cast<Eigen::Index>(j)) * members_[j].matrix();
  const double polished = inverse_quadratic_form(q, unit);
  const double value = std::min(polished, t.evaluate_scalar(solution.values));
  return {std::sqrt(value), {gamma}};
}

double quad_norm(const QuadraticNorm& norm, const Vector& x) { return norm(x); }

CompositeNormValue composite_norm(const CompositeNorm& norm, const Vector& x,
                                  CompositeMethod method) {
  return norm.evaluate(x, method);
}

UnitBallReport unit_ball_constraint_check(const CompositeNorm& norm,
                                          const ConstraintSet& constraints, double tol) {
  UnitBallReport report;
  report.worst_margin = -std::numeric_limits<double>::infinity();
  const RowVector c0 = output_row(static_cast<std::size_t>(norm.dimension()));
  const double output_bound = constraints.output_bound_squared();
  for (std::size_t j = 0; j < norm.size(); ++j) {
    const Matrix& q = norm.member(j).matrix();
    for (const RowVector& f : constraints.f) {
      if (f.size() != q.rows()) throw InvalidArgumentError("constraint row has the wrong dimension");
      report.worst_margin = std::max(report.worst_margin, (f * q * f.transpose())(0, 0) - 1.0);
    }
    if (std::isfinite(output_bound)) {
      report.worst_margin =
          std::max(report.worst_margin, (c0 * q * c0.transpose())(0, 0) - output_bound);
    }
  }
  report.ok = report.worst_margin <= tol;
  return report;
}

double barrier_value(const CompositeNorm& norm, const Vector& x) { return norm(x) - 1.0; }

Vector boundary_point(const CompositeNorm& norm, const Vector& direction) {
  const double value = norm(direction);
  if (!(value > 0.0)) throw InvalidArgumentError("direction must be nonzero");
  return direction / value;
}

}  // namespace rbc

#include "rbc/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>

#include "rbc/errors.hpp"

namespace rbc {

// ---------------------------------------------------------------------------
// AffineExpr

AffineExpr::AffineExpr(Eigen::Index rows, Eigen::Index cols)
    : constant_(Matrix::Zero(rows, cols)) {}

AffineExpr AffineExpr::constant(const Matrix& value) {
  AffineExpr e(value.rows(), value.cols());
  e.constant_ = value;
  return e;
}

AffineExpr AffineExpr::constant(double value) { return constant(Matrix::Constant(1, 1, value)); }

AffineExpr AffineExpr::variable(int index, const Matrix& coefficient) {
  AffineExpr e(coefficient.rows(), coefficient.cols());
  e.terms_.emplace(index, coefficient);
  return e;
}

Matrix AffineExpr::evaluate(const Vector& y) const {
  Matrix out = constant_;
  for (const auto& [i, coeff] : terms_) out += y(i) * coeff;
  return out;
}

double AffineExpr::evaluate_scalar(const Vector& y) const {
  if (rows() != 1 || cols() != 1) throw InvalidArgumentError("expression is not scalar");
  return evaluate(y)(0, 0);
}

AffineExpr AffineExpr::transpose() const {
  AffineExpr e = constant(constant_.transpose());
  for (const auto& [i, coeff] : terms_) e.terms_.emplace(i, coeff.transpose());
  return e;
}

AffineExpr AffineExpr::blocks(const std::vector<std::vector<AffineExpr>>& parts) {
  if (parts.empty() || parts.front().empty()) throw InvalidArgumentError("empty block layout");
  std::vector<Eigen::Index> row_sizes;
  std::vector<Eigen::Index> col_sizes;
  for (const auto& row : parts) {
    if (row.size() != parts.front().size()) throw InvalidArgumentError("ragged block layout");
    row_sizes.push_back(row.front().rows());
  }
  for (const auto& part : parts.front()) col_sizes.push_back(part.cols());

  Eigen::Index total_rows = 0;
  Eigen::Index total_cols = 0;
  for (auto r : row_sizes) total_rows += r;
  for (auto c : col_sizes) total_cols += c;

  AffineExpr out(total_rows, total_cols);
  Eigen::Index r0 = 0;
  for (std::size_t bi = 0; bi < parts.size(); ++bi) {
    Eigen::Index c0 = 0;
    for (std::size_t bj = 0; bj < parts[bi].size(); ++bj) {
      const auto& part = parts[bi][bj];
      if (part.rows() != row_sizes[bi] || part.cols() != col_sizes[bj]) {
        throw InvalidArgumentError("block dimensions do not line up");
      }
      out.constant_.block(r0, c0, part.rows(), part.cols()) = part.constant_;
      for (const auto& [i, coeff] : part.terms_) {
        auto [it, inserted] = out.terms_.try_emplace(i, Matrix::Zero(total_rows, total_cols));
        it->second.block(r0, c0, part.rows(), part.cols()) += coeff;
      }
      c0 += col_sizes[bj];
    }
    r0 += row_sizes[bi];
  }
  return out;
}

AffineExpr& AffineExpr::operator+=(const AffineExpr& other) {
  if (rows() != other.rows() || cols() != other.cols()) {
    throw InvalidArgumentError("affine expression size mismatch in addition");
  }
  constant_ += other.constant_;
  for (const auto& [i, coeff] : other.terms_) {
    auto [it, inserted] = terms_.try_emplace(i, coeff);
    if (!inserted) it->second += coeff;
  }
  return *this;
}

AffineExpr& AffineExpr::operator-=(const AffineExpr& other) { return *this += -1.0 * other; }

AffineExpr& AffineExpr::operator*=(double scale) {
  constant_ *= scale;
  for (auto& [i, coeff] : terms_) coeff *= scale;
  return *this;
}

AffineExpr operator*(const Matrix& m, const AffineExpr& e) {
  if (m.cols() != e.rows()) throw InvalidArgumentError("matrix-expression size mismatch");
  AffineExpr out = AffineExpr::constant(m * e.constant_);
  for (const auto& [i, coeff] : e.terms_) out.terms_.emplace(i, m * coeff);
  return out;
}

AffineExpr operator*(const AffineExpr& e, const Matrix& m) {
  if (e.cols() != m.rows()) throw InvalidArgumentError("expression-matrix size mismatch");
  AffineExpr out = AffineExpr::constant(e.constant_ * m);
  for (const auto& [i, coeff] : e.terms_) out.terms_.emplace(i, coeff * m);
  return out;
}

// ---------------------------------------------------------------------------
// SdpProblem

AffineExpr SdpProblem::add_scalar(std::string name) {
  const int index = num_variables();
  names_.push_back(name.empty() ? "y" + std::to_string(index) : std::move(name));
  return AffineExpr::variable(index, Matrix::Ones(1, 1));
}

AffineExpr SdpProblem::add_symmetric(Eigen::Index n, const std::string& name) {
  AffineExpr out(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i; j < n; ++j) {
      const int index = num_variables();
      names_.push_back((name.empty() ? "S" : name) + "[" + std::to_string(i) + "," +
                       std::to_string(j) + "]");
      Matrix basis = Matrix::Zero(n, n);
      basis(i, j) = 1.0;
      basis(j, i) = 1.0;
      out += AffineExpr::variable(index, basis);
    }
  }
  return out;
}

void SdpProblem::add_psd(const AffineExpr& expr, std::string label) {
  if (expr.rows() != expr.cols()) throw InvalidArgumentError("LMI block must be square");
  for (const auto& [i, coeff] : expr.terms()) {
    if (i < 0 || i >= num_variables()) {
      throw InvalidArgumentError("constraint references an unknown variable");
    }
  }
  AffineExpr sym = 0.5 * (expr + expr.transpose());
  constraints_.push_back({std::move(sym), std::move(label)});
}

void SdpProblem::add_nsd(const AffineExpr& expr, std::string label) {
  add_psd(-expr, std::move(label));
}

void SdpProblem::add_le(const AffineExpr& lhs, const AffineExpr& rhs, std::string label) {
  if (lhs.rows() != 1 || lhs.cols() != 1 || rhs.rows() != 1 || rhs.cols() != 1) {
    throw InvalidArgumentError("add_le expects scalar expressions");
  }
  add_psd(rhs - lhs, std::move(label));
}

void SdpProblem::minimize(const AffineExpr& objective) {
  if (objective.rows() != 1 || objective.cols() != 1) {
    throw InvalidArgumentError("objective must be scalar");
  }
  objective_.clear();
  for (const auto& [i, coeff] : objective.terms()) objective_[i] = coeff(0, 0);
  objective_offset_ = objective.constant_term()(0, 0);
  if (objective_.empty()) objective_[0] = 0.0;
}

void SdpProblem::maximize(const AffineExpr& objective) { minimize(-objective); }

Vector SdpProblem::objective() const {
  Vector c = Vector::Zero(num_variables());
  for (const auto& [i, value] : objective_) {
    if (i < num_variables()) c(i) = value;
  }
  return c;
}

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
      return "optimal";
    case SolveStatus::kInfeasible:
      return "infeasible";
    case SolveStatus::kNumericalFailure:
      return "numerical-failure";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Barrier method

namespace {

struct Block {
  Matrix base;
  std::vector<std::pair<int, Matrix>> terms;
};

Matrix block_value(const Block& block, const Vector& y) {
  Matrix f = block.base;
  for (const auto& [i, coeff] : block.terms) f.noalias() += y(i) * coeff;
  return f;
}

double min_eigenvalue(const Matrix& sym) {
  if (sym.rows() == 1) return sym(0, 0);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

// -sum log det F_k(y); false when some block is not PD.
bool barrier_value(const std::vector<Block>& blocks, const Vector& y, double& value) {
  value = 0.0;
  for (const auto& block : blocks) {
    const Matrix f = block_value(block, y);
    Eigen::LLT<Matrix> llt(f);
    if (llt.info() != Eigen::Success) return false;
    const Vector diag = llt.matrixLLT().diagonal();
    for (Eigen::Index i = 0; i < diag.size(); ++i) {
      if (!(diag(i) > 0.0)) return false;
      value -= 2.0 * std::log(diag(i));
    }
  }
  return std::isfinite(value);
}

bool barrier_derivatives(const std::vector<Block>& blocks, const Vector& y, Vector& grad,
                         Matrix& hess) {
  const auto m = y.size();
  grad = Vector::Zero(m);
  hess = Matrix::Zero(m, m);
  std::vector<Matrix> g;
  for (const auto& block : blocks) {
    const Matrix f = block_value(block, y);
    Eigen::LLT<Matrix> llt(f);
    if (llt.info() != Eigen::Success) return false;
    const Matrix finv = llt.solve(Matrix::Identity(f.rows(), f.cols()));
    g.clear();
    g.reserve(block.terms.size());
    for (const auto& [i, coeff] : block.terms) g.push_back(finv * coeff);
    for (std::size_t p = 0; p < block.terms.size(); ++p) {
      const int i = block.terms[p].first;
      grad(i) -= g[p].trace();
      for (std::size_t q = p; q < block.terms.size(); ++q) {
        const int j = block.terms[q].first;
        const double h = (g[p].array() * g[q].transpose().array()).sum();
        hess(i, j) += h;
        if (i != j) hess(j, i) += h;
      }
    }
  }
  return grad.allFinite() && hess.allFinite();
}

int barrier_degree(const std::vector<Block>& blocks) {
  int degree = 0;
  for (const auto& block : blocks) degree += static_cast<int>(block.base.rows());
  return degree;
}

enum class CenterOutcome { kCentered, kStopped, kFailed };

// Minimizes t c^T y + barrier(y) from a strictly feasible y by damped Newton.
// `stop` is polled after every accepted step. A centering that can no longer
// make representable progress counts as centered.
CenterOutcome center(const std::vector<Block>& blocks, const Vector& c, double t, Vector& y,
                     int& steps_left, int& steps_taken,
                     const std::function<bool(const Vector&)>& stop) {
  constexpr double kDecrementTolerance = 1e-11;
  constexpr double kArmijo = 0.01;
  constexpr int kMaxStepsPerCentering = 200;
  Vector grad;
  Matrix hess;
  for (int local = 0; local < kMaxStepsPerCentering; ++local) {
    if (steps_left <= 0) return CenterOutcome::kFailed;
    if (!barrier_derivatives(blocks, y, grad, hess)) return CenterOutcome::kFailed;
    const Vector g = t * c + grad;
    Eigen::LDLT<Matrix> ldlt(hess);
    Vector dy = -ldlt.solve(g);
    if (!dy.allFinite()) return CenterOutcome::kFailed;
    double slope = g.dot(dy);
    if (slope >= 0.0) {
      // Hessian lost definiteness numerically; fall back to steepest descent.
      dy = -g;
      slope = -g.squaredNorm();
    }
    if (0.5 * -slope <= kDecrementTolerance) return CenterOutcome::kCentered;

    double phi0 = 0.0;
    if (!barrier_value(blocks, y, phi0)) return CenterOutcome::kFailed;
    const double f0 = t * c.dot(y) + phi0;
    double step = 1.0;
    Vector candidate;
    bool accepted = false;
    while (step > 1e-12) {
      candidate = y + step * dy;
      double phi = 0.0;
      if (barrier_value(blocks, candidate, phi) &&
          t * c.dot(candidate) + phi <= f0 + kArmijo * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) return CenterOutcome::kCentered;
    --steps_left;
    ++steps_taken;
    y = std::move(candidate);
    if (stop && stop(y)) return CenterOutcome::kStopped;
  }
  return CenterOutcome::kCentered;
}

std::vector<Block> compile_blocks(const SdpProblem& problem, double variable_bound) {
  std::vector<Block> blocks;
  for (const auto& constraint : problem.constraints()) {
    Block block{constraint.expr.constant_term(), {}};
    for (const auto& [i, coeff] : constraint.expr.terms()) {
      if (coeff.cwiseAbs().maxCoeff() > 0.0) block.terms.emplace_back(i, coeff);
    }
    blocks.push_back(std::move(block));
  }
  for (int i = 0; i < problem.num_variables(); ++i) {
    blocks.push_back({Matrix::Constant(1, 1, variable_bound), {{i, Matrix::Ones(1, 1)}}});
    blocks.push_back({Matrix::Constant(1, 1, variable_bound), {{i, -Matrix::Ones(1, 1)}}});
  }
  return blocks;
}

double min_eigenvalue_over(const std::vector<Block>& blocks, const Vector& y) {
  double lambda = std::numeric_limits<double>::infinity();
  for (const auto& block : blocks) lambda = std::min(lambda, min_eigenvalue(block_value(block, y)));
  return lambda;
}

}  // namespace

double max_constraint_residual(const SdpProblem& problem, const Vector& y) {
  double residual = -std::numeric_limits<double>::infinity();
  for (const auto& constraint : problem.constraints()) {
    residual = std::max(residual, -min_eigenvalue(constraint.expr.evaluate(y)));
  }
  return residual;
}

SdpSolution solve_sdp(const SdpProblem& problem, const SolverOptions& options) {
  SdpSolution solution;
  SolveReport& report = solution.report;
  const int m = problem.num_variables();
  const Vector c = problem.objective();

  if (m == 0) {
    const Vector empty;
    report.max_constraint_residual = max_constraint_residual(problem, empty);
    report.status = report.max_constraint_residual <= options.tolerance
                        ? SolveStatus::kOptimal
                        : SolveStatus::kInfeasible;
    report.objective = problem.objective_offset();
    solution.values = empty;
    return solution;
  }

  const std::vector<Block> blocks = compile_blocks(problem, options.variable_bound);
  int steps_left = options.max_newton_steps;
  constexpr double kBarrierGrowth = 10.0;

  // Phase I: maximize s subject to F_k(y) - s I >= 0 and s <= 1.
  Vector y = Vector::Zero(m);
  const double lambda0 = min_eigenvalue_over(blocks, y);
  if (!(lambda0 > 0.0)) {
    std::vector<Block> phase1 = blocks;
    for (auto& block : phase1) {
      block.terms.emplace_back(m, -Matrix::Identity(block.base.rows(), block.base.cols()));
    }
    phase1.push_back({Matrix::Ones(1, 1), {{m, -Matrix::Ones(1, 1)}}});
    const int degree = barrier_degree(phase1);
    Vector z(m + 1);
    z.head(m) = y;
    z(m) = lambda0 - 1.0;
    Vector c1 = Vector::Zero(m + 1);
    c1(m) = -1.0;

    const auto strictly_feasible = [&](const Vector& candidate) {
      if (!(candidate(m) > 0.0)) return false;
      const Vector head = candidate.head(m);
      for (const auto& block : blocks) {
        Eigen::LLT<Matrix> llt(block_value(block, head));
        if (llt.info() != Eigen::Success) return false;
      }
      return true;
    };

    double t = 1.0;
    bool found = false;
    while (true) {
      const auto outcome = center(phase1, c1, t, z, steps_left, report.newton_steps,
                                  strictly_feasible);
      if (outcome == CenterOutcome::kStopped) {
        found = true;
        break;
      }
      if (outcome == CenterOutcome::kFailed) {
        report.status = SolveStatus::kNumericalFailure;
        report.message = "phase I Newton iteration failed";
        return solution;
      }
      const double gap = degree / t;
      if (z(m) + gap < 0.0 || gap < options.phase1_gap_tolerance) {
        report.status = SolveStatus::kInfeasible;
        report.max_constraint_residual = -z(m);
        report.duality_gap = gap;
        report.message = "no strictly feasible point (phase I margin " +
                         std::to_string(z(m)) + ")";
        return solution;
      }
      t *= kBarrierGrowth;
    }
    if (!found) return solution;
    y = z.head(m);
  }

  // Phase II.
  const int degree = barrier_degree(blocks);
  const bool feasibility_only = c.cwiseAbs().maxCoeff() == 0.0;
  double t = 1.0;
  double gap = 0.0;
  while (true) {
    const auto outcome = center(blocks, c, t, y, steps_left, report.newton_steps, {});
    if (outcome == CenterOutcome::kFailed) {
      report.status = SolveStatus::kNumericalFailure;
      report.message = "phase II Newton iteration failed";
      return solution;
    }
    gap = feasibility_only ? 0.0 : degree / t;
    const double scale = std::max(1.0, std::abs(c.dot(y)));
    if (gap <= options.gap_tolerance * scale) break;
    t *= kBarrierGrowth;
  }

  report.objective = c.dot(y) + problem.objective_offset();
  report.duality_gap = gap;
  report.max_constraint_residual =
      problem.constraints().empty() ? 0.0 : max_constraint_residual(problem, y);
  if (report.max_constraint_residual > options.tolerance) {
    report.status = SolveStatus::kNumericalFailure;
    report.message = "final iterate violates a constraint";
    return solution;
  }
  report.status = SolveStatus::kOptimal;
  solution.values = std::move(y);
  return solution;
}

}  // namespace rbc

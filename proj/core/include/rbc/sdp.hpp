#pragma once

// Small dense semidefinite programs in LMI form:
//
//   minimize    c^T y
//   subject to  F_k(y) = F_k0 + sum_i y_i F_ki  >= 0   (each block PSD)
//
// solved with a two-phase log-det barrier method. Intended for the handful of
// decision variables that certificate synthesis needs, not for large SDPs.

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "rbc/model.hpp"

namespace rbc {

/// Matrix-valued affine function of the decision vector:
/// constant + sum_i y_i * coefficient_i.
class AffineExpr {
 public:
  AffineExpr() = default;
  AffineExpr(Eigen::Index rows, Eigen::Index cols);

  static AffineExpr constant(const Matrix& value);
  static AffineExpr constant(double value);
  /// y_index * coefficient
  static AffineExpr variable(int index, const Matrix& coefficient);

  Eigen::Index rows() const { return constant_.rows(); }
  Eigen::Index cols() const { return constant_.cols(); }
  const Matrix& constant_term() const { return constant_; }
  const std::map<int, Matrix>& terms() const { return terms_; }

  Matrix evaluate(const Vector& y) const;
  double evaluate_scalar(const Vector& y) const;

  AffineExpr transpose() const;

  /// Assembles a block matrix; every row of blocks must have consistent sizes.
  static AffineExpr blocks(const std::vector<std::vector<AffineExpr>>& parts);

  AffineExpr& operator+=(const AffineExpr& other);
  AffineExpr& operator-=(const AffineExpr& other);
  AffineExpr& operator*=(double scale);

  friend AffineExpr operator+(AffineExpr lhs, const AffineExpr& rhs) { return lhs += rhs; }
  friend AffineExpr operator-(AffineExpr lhs, const AffineExpr& rhs) { return lhs -= rhs; }
  friend AffineExpr operator-(AffineExpr e) { return e *= -1.0; }
  friend AffineExpr operator*(double s, AffineExpr e) { return e *= s; }
  friend AffineExpr operator*(AffineExpr e, double s) { return e *= s; }
  friend AffineExpr operator*(const Matrix& m, const AffineExpr& e);
  friend AffineExpr operator*(const AffineExpr& e, const Matrix& m);

 private:
  Matrix constant_;
  std::map<int, Matrix> terms_;
};

class SdpProblem {
 public:
  /// New scalar decision variable as a 1x1 expression.
  AffineExpr add_scalar(std::string name = {});
  /// New symmetric n x n matrix variable (n(n+1)/2 scalars).
  AffineExpr add_symmetric(Eigen::Index n, const std::string& name = {});

  int num_variables() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& variable_names() const { return names_; }

  /// expr >= 0 (PSD). The expression is symmetrized; it must be square.
  void add_psd(const AffineExpr& expr, std::string label = {});
  /// expr <= 0 (NSD).
  void add_nsd(const AffineExpr& expr, std::string label = {});
  /// lhs <= rhs for 1x1 expressions.
  void add_le(const AffineExpr& lhs, const AffineExpr& rhs, std::string label = {});

  void minimize(const AffineExpr& objective);
  void maximize(const AffineExpr& objective);

  struct Constraint {
    AffineExpr expr;  // required PSD
    std::string label;
  };
  const std::vector<Constraint>& constraints() const { return constraints_; }
  /// Linear objective coefficients (minimization sense), one per variable.
  Vector objective() const;
  double objective_offset() const { return objective_offset_; }
  bool has_objective() const { return !objective_.empty(); }

 private:
  std::vector<std::string> names_;
  std::vector<Constraint> constraints_;
  std::map<int, double> objective_;
  double objective_offset_ = 0.0;
};

enum class SolveStatus { kOptimal, kInfeasible, kNumericalFailure };

const char* to_string(SolveStatus status);

struct SolverOptions {
  /// Eigenvalue residual allowed on "<= 0" constraints of an optimal point.
  double tolerance = 1e-7;
  /// Target bound on the duality gap (objective suboptimality).
  double gap_tolerance = 1e-9;
  /// Implicit box |y_i| <= variable_bound keeping the barrier bounded.
  double variable_bound = 1e6;
  /// Phase I decides infeasibility once its gap certificate drops below this.
  double phase1_gap_tolerance = 1e-12;
  int max_newton_steps = 2000;
};

struct SolveReport {
  SolveStatus status = SolveStatus::kNumericalFailure;
  double objective = 0.0;
  /// Largest eigenvalue over all constraints read as "-F_k <= 0". Negative
  /// means strictly feasible.
  double max_constraint_residual = 0.0;
  double duality_gap = 0.0;
  int newton_steps = 0;
  std::string message;
};

struct SdpSolution {
  SolveReport report;
  Vector values;  // decision vector; empty unless status is optimal
};

SdpSolution solve_sdp(const SdpProblem& problem, const SolverOptions& options = {});

/// Largest eigenvalue of -F_k(y) over the problem's constraints.
double max_constraint_residual(const SdpProblem& problem, const Vector& y);

}  // namespace rbc

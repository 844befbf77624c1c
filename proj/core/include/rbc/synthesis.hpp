#pragma once

#include <span>
#include <vector>

#include "rbc/errors.hpp"
#include "rbc/model.hpp"
#include "rbc/sdp.hpp"

namespace rbc {

/// Q >= epsilon I stands in for Q > 0.
inline constexpr double kStrictnessMargin = 1e-8;

struct SynthesisOptions {
  SolverOptions solver{};
  double strictness_margin = kStrictnessMargin;
};

/// Raised when a synthesis LMI has no solution; carries the solver report.
class SynthesisInfeasibleError : public Error {
 public:
  SynthesisInfeasibleError(const std::string& what, SolveReport report)
      : Error(what), report_(std::move(report)) {}
  const SolveReport& report() const { return report_; }

 private:
  SolveReport report_;
};

/// Largest eigenvalue of A Q + Q A^T + 2 alpha Q. Non-positive certifies that
/// the ellipsoid x^T Q^{-1} x <= 1 contracts at rate alpha under x' = A x.
double check_decay(const Matrix& A, const Matrix& Q, double alpha);

struct EllipsoidSynthesis {
  Matrix Q;
  double rho = 0.0;
  SolveReport report;
};

/// Minimizes rho subject to the state and input limits, the width condition
/// [[rho, x^T], [x, Q]] >= 0, Q >= eps I and common decay at rate alpha0 for
/// every closed-loop vertex.
EllipsoidSynthesis synthesize_q(std::span<const Matrix> vertices, const ConstraintSet& constraints,
                                double alpha0, const Vector& direction,
                                const SynthesisOptions& options = {});

struct BarrierCertificate {
  std::vector<Matrix> q_list;
  double gain = 0.0;
  double alpha0 = 0.0;
  ConstraintSet constraints;
  std::vector<Vector> directions;
  std::vector<double> rho;
};

/// One synthesize_q solve per direction.
BarrierCertificate synthesize_certificate(std::span<const Matrix> vertices,
                                          const ConstraintSet& constraints, double alpha0,
                                          std::span<const Vector> directions,
                                          const SynthesisOptions& options = {});

struct EstimatorDesign {
  Matrix A0;
  Vector a_hat;
  double alpha = 0.0;
  /// alpha_hi itself was feasible, so alpha is only a lower bound on the optimum.
  bool saturated = false;
  int bisection_steps = 0;
};

/// Bisection on the decay rate. Each step asks whether some companion matrix
/// A0 (characteristic coefficients |a_hat_i| <= trust_radius) satisfies
/// A0 Q_j + Q_j A0^T + 2 alpha Q_j <= 0 for every j.
///
/// Throws ContractViolationError when alpha_lo itself is infeasible.
EstimatorDesign synthesize_a0(std::span<const Matrix> q_list, double alpha_lo, double alpha_hi,
                              double bisect_tol = 1e-4, double trust_radius = 100.0,
                              const SolverOptions& solver = {});

/// Feasibility subproblem of synthesize_a0 at a fixed rate; returns the
/// companion coefficients or an empty vector.
Vector find_estimator_coefficients(std::span<const Matrix> q_list, double alpha,
                                   double trust_radius, const SolverOptions& solver = {});

}  // namespace rbc

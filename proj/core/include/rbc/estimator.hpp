#pragma once

#include <array>
#include <span>
#include <vector>

#include "rbc/model.hpp"

namespace rbc {

/// Output and input sampled at the four stages of one RK4 step.
struct StageInputs {
  std::array<double, 4> y{};
  std::array<double, 4> u{};

  static StageInputs held(double y, double u) {
    return {{y, y, y, y}, {u, u, u, u}};
  }
};

struct VertexEstimates {
  std::vector<Vector> estimates;
  /// Corner endpoint pattern each estimate was built from.
  std::vector<std::vector<int>> endpoints;
};

/// Identifier-based estimator driven only by u and y.
///
/// The sensitivity filters are carried in aggregated form as the matrices
/// E_y, E_u with E' = A0 E + I y (resp. u), E(0) = 0. For any coefficient
/// instance (a, b) the state estimate is x_hat = E_y (a_hat - a) + E_u b, and
/// x - x_hat = exp(A0 t) (x(0) - x_hat(0)).
class EstimatorBank {
 public:
  /// Validates that A0 is Hurwitz and certifies decay rate `alpha` for every
  /// Q_j; throws InvalidEstimatorError otherwise.
  EstimatorBank(Matrix A0, double alpha, double eps0_norm, std::span<const Matrix> q_list,
                double tol = 1e-7);

  /// Advances by dt with y and u held constant.
  void step(double y, double u, double dt);
  /// Advances by dt with y and u evaluated at each RK4 stage, as when the
  /// estimator is integrated jointly with the plant.
  void step(const StageInputs& inputs, double dt);

  const Matrix& A0() const { return a0_; }
  const Matrix& E_y() const { return e_y_; }
  const Matrix& E_u() const { return e_u_; }
  double alpha() const { return alpha_; }
  double eps0_norm() const { return eps0_norm_; }
  double time() const { return t_; }

  /// exp(-alpha t) * eps0_norm
  double error_bound() const;

  Vector estimate(const Vector& a_hat, const PlantInstance& instance) const;
  VertexEstimates vertex_states(const CornerSet& corners, const Vector& a_hat) const;

 private:
  Matrix a0_;
  double alpha_;
  double eps0_norm_;
  Matrix e_y_;
  Matrix e_u_;
  double t_ = 0.0;
};

inline EstimatorBank init_bank(Matrix A0, double alpha, double eps0_norm,
                               std::span<const Matrix> q_list, double tol = 1e-7) {
  return EstimatorBank(std::move(A0), alpha, eps0_norm, q_list, tol);
}

}  // namespace rbc

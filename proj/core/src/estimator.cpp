#include "rbc/estimator.hpp"

#include <cmath>
#include <string>

#include "rbc/errors.hpp"
#include "rbc/synthesis.hpp"

namespace rbc {

EstimatorBank::EstimatorBank(Matrix A0, double alpha, double eps0_norm,
                             std::span<const Matrix> q_list, double tol)
    : a0_(std::move(A0)), alpha_(alpha), eps0_norm_(eps0_norm) {
  if (a0_.rows() == 0 || a0_.rows() != a0_.cols()) {
    throw InvalidEstimatorError("A0 must be square and non-empty");
  }
  if (!(alpha_ > 0.0)) throw InvalidEstimatorError("decay rate must be positive");
  if (!(eps0_norm_ >= 0.0) || !std::isfinite(eps0_norm_)) {
    throw InvalidEstimatorError("initial error bound must be finite and non-negative");
  }
  if (!is_strictly_stable(a0_)) throw InvalidEstimatorError("A0 is not strictly stable");
  for (std::size_t j = 0; j < q_list.size(); ++j) {
    if (q_list[j].rows() != a0_.rows()) {
      throw InvalidEstimatorError("certificate matrix has the wrong dimension");
    }
    const double residual = check_decay(a0_, q_list[j], alpha_);
    if (residual > tol) {
      throw InvalidEstimatorError("A0 does not certify decay rate " + std::to_string(alpha_) +
                                  " for Q_" + std::to_string(j + 1) + " (residual " +
                                  std::to_string(residual) + ")");
    }
  }
  e_y_ = Matrix::Zero(a0_.rows(), a0_.cols());
  e_u_ = Matrix::Zero(a0_.rows(), a0_.cols());
}

void EstimatorBank::step(double y, double u, double dt) { step(StageInputs::held(y, u), dt); }

void EstimatorBank::step(const StageInputs& in, double dt) {
  if (!(dt > 0.0)) throw InvalidArgumentError("time step must be positive");
  const Matrix identity = Matrix::Identity(a0_.rows(), a0_.cols());
  const auto rate = [&](const Matrix& e, double input) -> Matrix {
    return a0_ * e + input * identity;
  };
  const auto advance = [&](Matrix& e, const std::array<double, 4>& input) {
    const Matrix k1 = rate(e, input[0]);
    const Matrix k2 = rate(e + (0.5 * dt) * k1, input[1]);
    const Matrix k3 = rate(e + (0.5 * dt) * k2, input[2]);
    const Matrix k4 = rate(e + dt * k3, input[3]);
    e += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  };
  advance(e_y_, in.y);
  advance(e_u_, in.u);
  t_ += dt;
}

double EstimatorBank::error_bound() const { return std::exp(-alpha_ * t_) * eps0_norm_; }

Vector EstimatorBank::estimate(const Vector& a_hat, const PlantInstance& instance) const {
  return e_y_ * (a_hat - instance.a) + e_u_ * instance.b;
}

VertexEstimates EstimatorBank::vertex_states(const CornerSet& corners, const Vector& a_hat) const {
  VertexEstimates out;
  out.estimates.reserve(corners.count());
  for (const auto& corner : corners.corners) {
    out.estimates.push_back(estimate(a_hat, corner.coefficients));
    out.endpoints.push_back(corner.endpoint);
  }
  return out;
}

}  // namespace rbc

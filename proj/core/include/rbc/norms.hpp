#pragma once

#include <concepts>
#include <cstddef>
#include <span>
#include <vector>

#include "rbc/errors.hpp"
#include "rbc/model.hpp"

namespace rbc {

/// ||x||_q = sqrt(x^T Q^{-1} x) for a symmetric positive definite Q.
class QuadraticNorm {
 public:
  explicit QuadraticNorm(Matrix q);

  double operator()(const Vector& x) const;
  const Matrix& matrix() const { return q_; }
  Eigen::Index dimension() const { return q_.rows(); }

 private:
  Matrix q_;
  Eigen::LLT<Matrix> llt_;
};

/// Simplex weights gamma (non-negative, summing to one).
struct GammaWeights {
  Vector gamma;
};

struct CompositeNormValue {
  double value = 0.0;
  GammaWeights weights;
};

enum class CompositeMethod {
  kAuto,           // golden section for two matrices, SDP otherwise
  kSdp,            // min t s.t. [[t, x^T], [x, Q(gamma)]] >= 0 over the simplex
  kGoldenSection,  // 1-D search over gamma_1; two matrices only
};

/// Composite quadratic norm: ||x||_c^2 = min over the simplex of
/// x^T (sum_j gamma_j Q_j)^{-1} x. Its unit ball is the convex hull of the
/// ellipsoids x^T Q_j^{-1} x <= 1.
class CompositeNorm {
 public:
  explicit CompositeNorm(std::vector<Matrix> q_list);

  CompositeNormValue evaluate(const Vector& x, CompositeMethod method = CompositeMethod::kAuto) const;
  double operator()(const Vector& x) const { return evaluate(x).value; }

  std::size_t size() const { return members_.size(); }
  Eigen::Index dimension() const { return members_.front().dimension(); }
  const QuadraticNorm& member(std::size_t j) const { return members_.at(j); }
  std::vector<Matrix> q_list() const;

 private:
  CompositeNormValue evaluate_golden(const Vector& unit) const;
  CompositeNormValue evaluate_sdp(const Vector& unit) const;

  std::vector<QuadraticNorm> members_;
};

double quad_norm(const QuadraticNorm& norm, const Vector& x);
CompositeNormValue composite_norm(const CompositeNorm& norm, const Vector& x,
                                  CompositeMethod method = CompositeMethod::kAuto);

template <typename Norm>
concept VectorNorm = requires(const Norm& norm, const Vector& x) {
  { norm(x) } -> std::convertible_to<double>;
};

struct VertexMax {
  double value = 0.0;
  std::size_t index = 0;
};

/// Largest norm over a point set. The norm of any convex combination of the
/// points is bounded by the returned value.
template <VectorNorm Norm>
VertexMax max_vertex_norm(const Norm& norm, std::span<const Vector> points) {
  if (points.empty()) throw InvalidArgumentError("max_vertex_norm needs at least one point");
  VertexMax best{norm(points[0]), 0};
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double value = norm(points[i]);
    if (value > best.value) best = {value, i};
  }
  return best;
}

struct UnitBallReport {
  bool ok = true;
  /// max over all checks of (lhs - rhs); non-positive when every check holds.
  double worst_margin = 0.0;
};

/// Checks f_i Q_j f_i^T <= 1 and c0 Q_j c0^T <= u_max^2 / gain^2 for every
/// member. Containment of each ellipsoid gives containment of their hull.
UnitBallReport unit_ball_constraint_check(const CompositeNorm& norm,
                                          const ConstraintSet& constraints, double tol = 0.0);

/// ||x||_c - 1
double barrier_value(const CompositeNorm& norm, const Vector& x);

/// Point where the ray through `direction` leaves the unit ball.
Vector boundary_point(const CompositeNorm& norm, const Vector& direction);

}  // namespace rbc

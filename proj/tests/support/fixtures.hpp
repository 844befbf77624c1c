#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "rbc/rbc.hpp"

namespace rbc::testing {

inline UncertainPlant exoskeleton_plant() {
  return mass_spring_damper(1.0, 12.0, IntervalCoefficient(4.0, 12.0));
}

inline ConstraintSet exoskeleton_constraints() {
  ConstraintSet c;
  RowVector f(2);
  f << -1.0, 1.0 / 12.0;
  c.f.push_back(f);
  c.u_max = 1.2;
  c.gain = -1.2;
  return c;
}

inline std::vector<Vector> exoskeleton_directions() {
  return {Vector::Unit(2, 0), (Vector(2) << 1.0, 12.0).finished()};
}

struct ExoskeletonDesign {
  UncertainPlant plant;
  ConstraintSet constraints;
  BarrierCertificate certificate;
  EstimatorDesign estimator;
};

/// Synthesized once per test binary; the synthesis itself is tested separately.
inline const ExoskeletonDesign& exoskeleton_design() {
  static const ExoskeletonDesign design = [] {
    auto plant = exoskeleton_plant();
    auto constraints = exoskeleton_constraints();
    const auto vertices = pldi_vertices(plant, constraints.gain);
    const auto directions = exoskeleton_directions();
    auto certificate = synthesize_certificate(vertices, constraints, 0.5, directions);
    auto estimator = synthesize_a0(certificate.q_list, 0.5, 10.0);
    return ExoskeletonDesign{std::move(plant), std::move(constraints), std::move(certificate),
                             std::move(estimator)};
  }();
  return design;
}

inline SafetySystem exoskeleton_system() {
  const auto& d = exoskeleton_design();
  return SafetySystem{d.plant, d.certificate, d.estimator.a_hat, d.estimator.alpha};
}

/// Brute-force composite norm: minimum of x^T Q(gamma)^{-1} x over an
/// equispaced grid of gamma_1 in [0, 1] (two matrices).
inline double grid_composite_norm(const std::vector<Matrix>& q_list, const Vector& x,
                                  int points = 10001) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < points; ++i) {
    const double g = static_cast<double>(i) / (points - 1);
    const Matrix q = g * q_list[0] + (1.0 - g) * q_list[1];
    best = std::min(best, x.dot(q.ldlt().solve(x)));
  }
  return std::sqrt(best);
}

inline Vector random_vector(std::mt19937_64& rng, Eigen::Index n, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = normal(rng);
  return v;
}

/// Random symmetric positive definite matrix with eigenvalues in [lo, hi].
inline Matrix random_spd(std::mt19937_64& rng, Eigen::Index n, double lo = 0.2, double hi = 5.0) {
  std::uniform_real_distribution<double> eig(lo, hi);
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = std::normal_distribution<double>()(rng);
  const Eigen::HouseholderQR<Matrix> qr(m);
  const Matrix q = qr.householderQ();
  Vector d(n);
  for (Eigen::Index i = 0; i < n; ++i) d(i) = eig(rng);
  Matrix out = q * d.asDiagonal() * q.transpose();
  return 0.5 * (out + out.transpose());
}

/// Point uniformly distributed in angle on the boundary of the composite unit
/// ball, scaled by a radius drawn from [0, max_scale].
inline Vector random_point_in_ball(std::mt19937_64& rng, const CompositeNorm& norm,
                                   double max_scale) {
  const Vector d = random_vector(rng, norm.dimension());
  std::uniform_real_distribution<double> radius(0.0, max_scale);
  return radius(rng) * boundary_point(norm, d);
}

}  // namespace rbc::testing

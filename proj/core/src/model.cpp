#include "rbc/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rbc/errors.hpp"

namespace rbc {

IntervalCoefficient::IntervalCoefficient(double lower, double upper)
    : lower_(lower), upper_(upper) {
  if (!std::isfinite(lower) || !std::isfinite(upper)) {
    throw InvalidArgumentError("interval endpoints must be finite");
  }
  if (lower > upper) {
    throw InvalidArgumentError("interval lower endpoint " + std::to_string(lower) +
                               " exceeds upper endpoint " + std::to_string(upper));
  }
}

UncertainPlant::UncertainPlant(std::vector<IntervalCoefficient> a,
                               std::vector<IntervalCoefficient> b,
                               std::vector<std::vector<CoefficientRef>> tie_groups)
    : a_(std::move(a)), b_(std::move(b)), tie_groups_(std::move(tie_groups)) {
  if (a_.empty()) throw InvalidOrderError("plant order must be at least 1");
  if (a_.size() != b_.size()) {
    throw InvalidArgumentError("numerator and denominator must both have n coefficients");
  }
  const std::size_t n = a_.size();
  std::vector<bool> tied_a(n, false);
  std::vector<bool> tied_b(n, false);
  for (const auto& group : tie_groups_) {
    if (group.empty()) throw InvalidArgumentError("empty tie group");
    for (const auto& ref : group) {
      if (ref.index >= n) throw InvalidArgumentError("tie group index out of range");
      auto& used = ref.polynomial == CoefficientRef::Polynomial::kDenominator ? tied_a : tied_b;
      if (used[ref.index]) {
        throw InvalidArgumentError("coefficient appears in more than one tie group");
      }
      used[ref.index] = true;
    }
    parameters_.push_back(group);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!tied_a[i]) parameters_.push_back({{CoefficientRef::Polynomial::kDenominator, i}});
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!tied_b[i]) parameters_.push_back({{CoefficientRef::Polynomial::kNumerator, i}});
  }
}

const IntervalCoefficient& UncertainPlant::coefficient(const CoefficientRef& ref) const {
  const auto& poly = ref.polynomial == CoefficientRef::Polynomial::kDenominator ? a_ : b_;
  return poly.at(ref.index);
}

double UncertainPlant::parameter_width(std::size_t p) const {
  double width = 0.0;
  for (const auto& ref : parameters_.at(p)) width = std::max(width, coefficient(ref).width());
  return width;
}

PlantInstance UncertainPlant::instance_at(std::span<const double> theta) const {
  if (theta.size() != parameters_.size()) {
    throw InvalidArgumentError("expected one position per uncertainty parameter");
  }
  PlantInstance out{Vector(order()), Vector(order())};
  for (std::size_t p = 0; p < parameters_.size(); ++p) {
    for (const auto& ref : parameters_[p]) {
      const double value = coefficient(ref).at(theta[p]);
      if (ref.polynomial == CoefficientRef::Polynomial::kDenominator) {
        out.a(static_cast<Eigen::Index>(ref.index)) = value;
      } else {
        out.b(static_cast<Eigen::Index>(ref.index)) = value;
      }
    }
  }
  return out;
}

PlantInstance UncertainPlant::nominal() const {
  const std::vector<double> half(parameters_.size(), 0.5);
  return instance_at(half);
}

bool UncertainPlant::contains(const PlantInstance& instance, double tol) const {
  const auto n = static_cast<Eigen::Index>(order());
  if (instance.a.size() != n || instance.b.size() != n) return false;
  auto value_of = [&](const CoefficientRef& ref) {
    const auto i = static_cast<Eigen::Index>(ref.index);
    return ref.polynomial == CoefficientRef::Polynomial::kDenominator ? instance.a(i)
                                                                      : instance.b(i);
  };
  for (const auto& group : parameters_) {
    double theta = std::numeric_limits<double>::quiet_NaN();
    for (const auto& ref : group) {
      const auto& interval = coefficient(ref);
      const double v = value_of(ref);
      if (!interval.contains(v, tol)) return false;
      if (interval.width() <= tol) continue;
      const double position = (v - interval.lower()) / interval.width();
      if (std::isnan(theta)) {
        theta = position;
      } else if (std::abs(position - theta) > tol) {
        return false;
      }
    }
  }
  return true;
}

UncertainPlant mass_spring_damper(double mass, double damping, IntervalCoefficient stiffness) {
  if (!(mass > 0.0)) throw InvalidArgumentError("mass must be positive");
  const IntervalCoefficient k_over_m(stiffness.lower() / mass, stiffness.upper() / mass);
  using P = CoefficientRef::Polynomial;
  return UncertainPlant({IntervalCoefficient::exact(damping / mass), k_over_m},
                        {IntervalCoefficient::exact(0.0), k_over_m},
                        {{{P::kDenominator, 1}, {P::kNumerator, 1}}});
}

PlantInstance mass_spring_damper_instance(double mass, double damping, double stiffness) {
  if (!(mass > 0.0)) throw InvalidArgumentError("mass must be positive");
  PlantInstance out{Vector(2), Vector(2)};
  out.a << damping / mass, stiffness / mass;
  out.b << 0.0, stiffness / mass;
  return out;
}

Matrix shift_matrix(std::size_t n) {
  const auto m = static_cast<Eigen::Index>(n);
  Matrix s = Matrix::Zero(m, m);
  for (Eigen::Index i = 0; i + 1 < m; ++i) s(i, i + 1) = 1.0;
  return s;
}

RowVector output_row(std::size_t n) {
  RowVector c0 = RowVector::Zero(static_cast<Eigen::Index>(n));
  if (n > 0) c0(0) = 1.0;
  return c0;
}

CanonicalRealization observable_canonical(const Vector& a, const Vector& b) {
  if (a.size() == 0) throw InvalidOrderError("realization order must be at least 1");
  if (a.size() != b.size()) {
    throw InvalidArgumentError("numerator and denominator lengths differ");
  }
  const auto n = static_cast<std::size_t>(a.size());
  CanonicalRealization r;
  r.c0 = output_row(n);
  r.A = shift_matrix(n) - a * r.c0;
  r.b_u = b;
  return r;
}

double spectral_abscissa(const Matrix& A) {
  Eigen::EigenSolver<Matrix> solver(A, /*computeEigenvectors=*/false);
  return solver.eigenvalues().real().maxCoeff();
}

bool is_strictly_stable(const Matrix& A) { return spectral_abscissa(A) < 0.0; }

ShiftedRealization shifted_realization(const Vector& a_instance, const Vector& b_instance,
                                       const Vector& a_hat) {
  if (a_hat.size() != a_instance.size()) {
    throw InvalidArgumentError("a_hat must have one entry per denominator coefficient");
  }
  const auto estimator = observable_canonical(a_hat, b_instance);
  if (!is_strictly_stable(estimator.A)) {
    throw InstabilityError("A0 built from a_hat is not strictly stable");
  }
  return {estimator.A, a_hat, a_hat - a_instance, b_instance};
}

double ConstraintSet::output_bound_squared() const {
  if (gain == 0.0) return std::numeric_limits<double>::infinity();
  return (u_max * u_max) / (gain * gain);
}

CornerSet enumerate_corners(const UncertainPlant& plant, double tol) {
  if (tol < 0.0) throw InvalidArgumentError("degeneracy tolerance must be non-negative");
  std::vector<std::size_t> active;
  for (std::size_t p = 0; p < plant.parameter_count(); ++p) {
    if (plant.parameter_width(p) > tol) active.push_back(p);
  }
  const std::size_t count = std::size_t{1} << active.size();
  CornerSet out;
  out.corners.reserve(count);
  std::vector<double> theta(plant.parameter_count(), 0.0);
  for (std::size_t mask = 0; mask < count; ++mask) {
    Corner corner;
    corner.endpoint.assign(plant.parameter_count(), 0);
    for (std::size_t k = 0; k < active.size(); ++k) {
      const int bit = static_cast<int>((mask >> k) & 1U);
      corner.endpoint[active[k]] = bit;
      theta[active[k]] = bit;
    }
    corner.coefficients = plant.instance_at(theta);
    out.corners.push_back(std::move(corner));
  }
  return out;
}

Matrix closed_loop(const PlantInstance& instance, double gain) {
  const auto r = observable_canonical(instance.a, instance.b);
  return r.A + r.b_u * gain * r.c0;
}

std::vector<Matrix> pldi_vertices(const UncertainPlant& plant, double gain, double tol) {
  std::vector<Matrix> out;
  for (const auto& corner : enumerate_corners(plant, tol).corners) {
    out.push_back(closed_loop(corner.coefficients, gain));
  }
  return out;
}

}  // namespace rbc

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace rbc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

inline constexpr double kDefaultDegeneracyTolerance = 1e-12;

/// Closed interval [lower, upper] for one transfer-function coefficient.
class IntervalCoefficient {
 public:
  IntervalCoefficient(double lower, double upper);
  /// Zero-width interval.
  static IntervalCoefficient exact(double value) { return {value, value}; }

  double lower() const { return lower_; }
  double upper() const { return upper_; }
  double width() const { return upper_ - lower_; }
  double midpoint() const { return 0.5 * (lower_ + upper_); }
  bool contains(double value, double tol = 0.0) const {
    return value >= lower_ - tol && value <= upper_ + tol;
  }
  /// lower + theta * (upper - lower)
  double at(double theta) const { return lower_ + theta * (upper_ - lower_); }

 private:
  double lower_;
  double upper_;
};

/// Addresses a_i (denominator) or b_i (numerator); `index` is zero-based.
struct CoefficientRef {
  enum class Polynomial { kDenominator, kNumerator };
  Polynomial polynomial = Polynomial::kDenominator;
  std::size_t index = 0;

  friend bool operator==(const CoefficientRef&, const CoefficientRef&) = default;
};

/// One point of the coefficient box: denominator a (monic, descending powers
/// without the leading 1) and numerator b.
struct PlantInstance {
  Vector a;
  Vector b;
};

/// Strictly proper SISO plant
///
///   P(s) = (b_1 s^{n-1} + ... + b_n) / (s^n + a_1 s^{n-1} + ... + a_n)
///
/// with every coefficient confined to an interval. Coefficients listed in the
/// same tie group share one scalar uncertainty theta in [0, 1]: they all sit at
/// their lower endpoints together or move together towards their upper ones.
/// Every tie group and every untied coefficient is one uncertainty parameter.
class UncertainPlant {
 public:
  UncertainPlant(std::vector<IntervalCoefficient> a, std::vector<IntervalCoefficient> b,
                 std::vector<std::vector<CoefficientRef>> tie_groups = {});

  std::size_t order() const { return a_.size(); }
  const std::vector<IntervalCoefficient>& denominator() const { return a_; }
  const std::vector<IntervalCoefficient>& numerator() const { return b_; }
  const std::vector<std::vector<CoefficientRef>>& tie_groups() const { return tie_groups_; }

  /// Coefficients grouped by uncertainty parameter, tie groups first.
  const std::vector<std::vector<CoefficientRef>>& parameters() const { return parameters_; }
  std::size_t parameter_count() const { return parameters_.size(); }
  /// Largest interval width among the members of parameter `p`.
  double parameter_width(std::size_t p) const;

  const IntervalCoefficient& coefficient(const CoefficientRef& ref) const;

  /// Instance with every parameter p at position theta[p] in [0, 1].
  PlantInstance instance_at(std::span<const double> theta) const;
  PlantInstance nominal() const;

  /// True when the instance lies in the box and respects the tie groups.
  bool contains(const PlantInstance& instance, double tol = 1e-9) const;

 private:
  std::vector<IntervalCoefficient> a_;
  std::vector<IntervalCoefficient> b_;
  std::vector<std::vector<CoefficientRef>> tie_groups_;
  std::vector<std::vector<CoefficientRef>> parameters_;
};

/// m_e y'' + b_e y' + k_h y = k_h u with the stiffness k_h uncertain. The
/// stiffness enters a_2 and b_2 through one tied parameter.
UncertainPlant mass_spring_damper(double mass, double damping, IntervalCoefficient stiffness);
PlantInstance mass_spring_damper_instance(double mass, double damping, double stiffness);

/// (A, b_u, c0) in observable canonical form, c0 = [1, 0, ..., 0].
struct CanonicalRealization {
  Matrix A;
  Vector b_u;
  RowVector c0;
};

CanonicalRealization observable_canonical(const Vector& a, const Vector& b);

/// Upper shift matrix (ones on the superdiagonal).
Matrix shift_matrix(std::size_t n);
RowVector output_row(std::size_t n);

/// A = A0 + b_y c0 with A0 the companion matrix of a_hat.
struct ShiftedRealization {
  Matrix A0;
  Vector a_hat;
  Vector b_y;
  Vector b_u;
};

ShiftedRealization shifted_realization(const Vector& a_instance, const Vector& b_instance,
                                       const Vector& a_hat);

bool is_strictly_stable(const Matrix& A);
double spectral_abscissa(const Matrix& A);

/// State half-spaces |f_i x| <= 1, input bound |u| <= u_max and the static
/// output feedback gain used by the backup law.
struct ConstraintSet {
  std::vector<RowVector> f;
  double u_max = 1.0;
  double gain = 0.0;

  /// u_max^2 / gain^2; infinite when gain == 0 (no input bound on the state).
  double output_bound_squared() const;
};

struct Corner {
  PlantInstance coefficients;
  /// 0 / 1 per uncertainty parameter (lower / upper endpoint).
  std::vector<int> endpoint;
};

struct CornerSet {
  std::vector<Corner> corners;
  std::size_t count() const { return corners.size(); }
};

/// Every endpoint combination of the non-degenerate uncertainty parameters.
/// Parameters no wider than `tol` are pinned to their lower endpoint.
CornerSet enumerate_corners(const UncertainPlant& plant,
                            double tol = kDefaultDegeneracyTolerance);

/// A(a) + b * gain * c0
Matrix closed_loop(const PlantInstance& instance, double gain);

/// Closed-loop vertex matrices, one per corner of `enumerate_corners`.
std::vector<Matrix> pldi_vertices(const UncertainPlant& plant, double gain,
                                  double tol = kDefaultDegeneracyTolerance);

}  // namespace rbc

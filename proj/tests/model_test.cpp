#include <complex>

#include <gtest/gtest.h>

#include "support/fixtures.hpp"

namespace rbc {
namespace {

using testing::exoskeleton_plant;

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

// c0 (sI - A)^{-1} b_u evaluated directly.
std::complex<double> realization_response(const CanonicalRealization& r, std::complex<double> s) {
  const auto n = r.A.rows();
  const Eigen::MatrixXcd m = s * Eigen::MatrixXcd::Identity(n, n) - r.A.cast<std::complex<double>>();
  const Eigen::VectorXcd x = m.partialPivLu().solve(r.b_u.cast<std::complex<double>>());
  return (r.c0.cast<std::complex<double>>() * x)(0);
}

// (b_1 s^{n-1} + ... + b_n) / (s^n + a_1 s^{n-1} + ... + a_n) by Horner.
std::complex<double> polynomial_ratio(const Vector& a, const Vector& b, std::complex<double> s) {
  std::complex<double> num = 0.0;
  std::complex<double> den = 1.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    num = num * s + b(i);
    den = den * s + a(i);
  }
  return num / den;
}

TEST(IntervalCoefficient, RejectsReversedOrNonFiniteBounds) {
  EXPECT_THROW(IntervalCoefficient(2.0, 1.0), InvalidArgumentError);
  EXPECT_THROW(IntervalCoefficient(0.0, std::numeric_limits<double>::infinity()),
               InvalidArgumentError);
  EXPECT_THROW(IntervalCoefficient(std::nan(""), 1.0), InvalidArgumentError);
  const IntervalCoefficient c(4.0, 12.0);
  EXPECT_DOUBLE_EQ(c.width(), 8.0);
  EXPECT_DOUBLE_EQ(c.midpoint(), 8.0);
  EXPECT_DOUBLE_EQ(c.at(0.25), 6.0);
}

TEST(ObservableCanonical, ExoskeletonAtNominalStiffness) {
  const auto r = observable_canonical(vec({12, 8}), vec({0, 8}));
  Matrix expected(2, 2);
  expected << -12, 1, -8, 0;
  EXPECT_EQ(r.A, expected);
  EXPECT_EQ(r.b_u, vec({0, 8}));
  EXPECT_EQ(r.c0, (RowVector(2) << 1, 0).finished());
}

TEST(ObservableCanonical, ZeroCoefficientsGiveShiftMatrix) {
  const auto r = observable_canonical(Vector::Zero(4), Vector::Zero(4));
  EXPECT_EQ(r.A, shift_matrix(4));
  EXPECT_EQ(r.b_u, Vector::Zero(4));
}

TEST(ObservableCanonical, FirstOrder) {
  const auto r = observable_canonical(vec({3}), vec({2}));
  EXPECT_EQ(r.A(0, 0), -3.0);
  EXPECT_EQ(r.b_u(0), 2.0);
  const std::complex<double> s(0.7, 1.3);
  EXPECT_NEAR(std::abs(realization_response(r, s) - 2.0 / (s + 3.0)), 0.0, 1e-14);
}

TEST(ObservableCanonical, ZeroOrderIsRejected) {
  EXPECT_THROW(observable_canonical(Vector(0), Vector(0)), InvalidOrderError);
  EXPECT_THROW(observable_canonical(vec({1, 2}), vec({1})), InvalidArgumentError);
}

TEST(ObservableCanonical, TransferFunctionMatchesPolynomialsAtEveryCorner) {
  std::vector<IntervalCoefficient> a{{1, 3}, {-2, 5}, {0.5, 0.5}};
  std::vector<IntervalCoefficient> b{{0, 1}, {2, 4}, {-1, 1}};
  const UncertainPlant plant(a, b);
  const std::complex<double> samples[] = {{0.3, 0.0}, {-0.2, 2.0}, {1.5, -0.7}, {0.0, 10.0}};
  for (const auto& corner : enumerate_corners(plant).corners) {
    const auto r = observable_canonical(corner.coefficients.a, corner.coefficients.b);
    for (const auto s : samples) {
      const auto expected = polynomial_ratio(corner.coefficients.a, corner.coefficients.b, s);
      const auto actual = realization_response(r, s);
      EXPECT_LE(std::abs(actual - expected), 1e-10 * std::max(1.0, std::abs(expected)));
    }
  }
}

TEST(UncertainPlant, ValidatesShapeAndTies) {
  EXPECT_THROW(UncertainPlant({}, {}), InvalidOrderError);
  EXPECT_THROW(UncertainPlant({{1, 2}}, {{1, 2}, {0, 0}}), InvalidArgumentError);
  using P = CoefficientRef::Polynomial;
  EXPECT_THROW(UncertainPlant({{1, 2}}, {{1, 2}}, {{{P::kDenominator, 3}}}), InvalidArgumentError);
  EXPECT_THROW(UncertainPlant({{1, 2}}, {{1, 2}},
                              {{{P::kDenominator, 0}}, {{P::kDenominator, 0}, {P::kNumerator, 0}}}),
               InvalidArgumentError);
}

TEST(UncertainPlant, ContainsRespectsTieGroups) {
  const auto plant = exoskeleton_plant();
  EXPECT_TRUE(plant.contains(mass_spring_damper_instance(1, 12, 8)));
  EXPECT_FALSE(plant.contains(mass_spring_damper_instance(1, 12, 13)));
  PlantInstance broken = mass_spring_damper_instance(1, 12, 8);
  broken.b(1) = 6.0;  // inside the box but off the tied line
  EXPECT_FALSE(plant.contains(broken));
}

TEST(EnumerateCorners, ExoskeletonHasTwoTiedCorners) {
  const auto corners = enumerate_corners(exoskeleton_plant(), 1e-12);
  ASSERT_EQ(corners.count(), 2u);
  EXPECT_EQ(corners.corners[0].coefficients.a, vec({12, 4}));
  EXPECT_EQ(corners.corners[0].coefficients.b, vec({0, 4}));
  EXPECT_EQ(corners.corners[1].coefficients.a, vec({12, 12}));
  EXPECT_EQ(corners.corners[1].coefficients.b, vec({0, 12}));
}

TEST(EnumerateCorners, UntiedExoskeletonHasFour) {
  const UncertainPlant plant({{12, 12}, {4, 12}}, {{0, 0}, {4, 12}});
  EXPECT_EQ(enumerate_corners(plant).count(), 4u);
}

TEST(EnumerateCorners, DegenerateAndIndependentCounts) {
  const UncertainPlant exact({{1, 1}, {2, 2}}, {{0, 0}, {3, 3}});
  EXPECT_EQ(enumerate_corners(exact).count(), 1u);
  const UncertainPlant two({{1, 2}, {2, 2}}, {{0, 0}, {3, 4}});
  EXPECT_EQ(enumerate_corners(two).count(), 4u);
  const UncertainPlant all({{1, 2}, {2, 3}}, {{0, 1}, {3, 4}});
  EXPECT_EQ(enumerate_corners(all).count(), 16u);
  // Widths at or below the tolerance collapse.
  const UncertainPlant tiny({{1, 1 + 1e-14}}, {{1, 1}});
  EXPECT_EQ(enumerate_corners(tiny, 1e-12).count(), 1u);
  EXPECT_EQ(enumerate_corners(tiny, 0.0).count(), 2u);
}

TEST(EnumerateCorners, EveryCornerSitsAtEndpoints) {
  const UncertainPlant plant({{1, 2}, {-3, 3}}, {{0, 1}, {3, 3}});
  for (const auto& corner : enumerate_corners(plant).corners) {
    for (Eigen::Index i = 0; i < 2; ++i) {
      const auto& ai = plant.denominator()[static_cast<std::size_t>(i)];
      const auto& bi = plant.numerator()[static_cast<std::size_t>(i)];
      EXPECT_TRUE(corner.coefficients.a(i) == ai.lower() || corner.coefficients.a(i) == ai.upper());
      EXPECT_TRUE(corner.coefficients.b(i) == bi.lower() || corner.coefficients.b(i) == bi.upper());
    }
  }
}

TEST(PldiVertices, ExoskeletonClosedLoop) {
  const auto vertices = pldi_vertices(exoskeleton_plant(), -1.2);
  ASSERT_EQ(vertices.size(), 2u);
  Matrix v1(2, 2), v2(2, 2);
  v1 << -12, 1, -8.8, 0;
  v2 << -12, 1, -26.4, 0;
  EXPECT_TRUE(vertices[0].isApprox(v1, 1e-15));
  EXPECT_TRUE(vertices[1].isApprox(v2, 1e-15));
}

TEST(PldiVertices, MatchCornersElementwise) {
  const UncertainPlant plant({{1, 2}, {2, 3}}, {{0, 1}, {3, 4}});
  const auto corners = enumerate_corners(plant);
  const auto vertices = pldi_vertices(plant, 0.7);
  ASSERT_EQ(vertices.size(), corners.count());
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    EXPECT_EQ(vertices[i], closed_loop(corners.corners[i].coefficients, 0.7));
  }
}

TEST(PldiVertices, DegeneratePlantGivesNominalClosedLoop) {
  const UncertainPlant plant({{3, 3}, {2, 2}}, {{0, 0}, {1, 1}});
  const auto vertices = pldi_vertices(plant, -2.0);
  ASSERT_EQ(vertices.size(), 1u);
  EXPECT_EQ(vertices[0], closed_loop(plant.nominal(), -2.0));
}

TEST(ShiftedRealization, ReferenceEstimatorAtNominalStiffness) {
  const auto s = shifted_realization(vec({12, 8}), vec({0, 8}), vec({13.60, 18.68}));
  EXPECT_NEAR(s.b_y(0), 1.60, 1e-12);
  EXPECT_NEAR(s.b_y(1), 10.68, 1e-12);
  const Matrix round_trip = s.A0 + s.b_y * output_row(2);
  EXPECT_TRUE(round_trip.isApprox(observable_canonical(vec({12, 8}), vec({0, 8})).A, 1e-14));
}

TEST(ShiftedRealization, IdentityShift) {
  const auto s = shifted_realization(vec({3, 2}), vec({0, 1}), vec({3, 2}));
  EXPECT_EQ(s.b_y, Vector::Zero(2));
  EXPECT_EQ(s.A0, observable_canonical(vec({3, 2}), vec({0, 1})).A);
}

TEST(ShiftedRealization, FirstOrderStability) {
  EXPECT_NO_THROW(shifted_realization(vec({1}), vec({1}), vec({0.5})));
  EXPECT_THROW(shifted_realization(vec({1}), vec({1}), vec({-1})), InstabilityError);
}

TEST(ShiftedRealization, RoundTripOnRandomInstances) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const Vector a = testing::random_vector(rng, 3);
    const Vector b = testing::random_vector(rng, 3);
    const Vector a_hat = vec({6, 11, 6});  // (s+1)(s+2)(s+3)
    const auto s = shifted_realization(a, b, a_hat);
    const Matrix rebuilt = s.A0 + s.b_y * output_row(3);
    EXPECT_TRUE(rebuilt.isApprox(observable_canonical(a, b).A, 1e-13));
  }
}

TEST(ConstraintSet, OutputBoundFromInputLimit) {
  const auto c = testing::exoskeleton_constraints();
  EXPECT_NEAR(c.output_bound_squared(), 1.0, 1e-15);
  ConstraintSet no_gain;
  EXPECT_TRUE(std::isinf(no_gain.output_bound_squared()));
}

}  // namespace
}  // namespace rbc

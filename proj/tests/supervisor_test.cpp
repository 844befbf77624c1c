#include <gtest/gtest.h>

#include "support/fixtures.hpp"

namespace rbc {
namespace {

BarrierEstimate with_max(double value) {
  BarrierEstimate e;
  e.per_vertex = {value - 0.5, value};
  e.max_value = value;
  e.max_index = 1;
  return e;
}

TEST(BarrierEstimate, InitialConditionIsZero) {
  const CompositeNorm norm(testing::exoskeleton_design().certificate.q_list);
  VertexEstimates est;
  est.estimates = {Vector::Zero(2), Vector::Zero(2)};
  const auto b = barrier_estimate(norm, est, 1.0);
  EXPECT_EQ(b.per_vertex, (std::vector<double>{0.0, 0.0}));
  EXPECT_EQ(b.max_value, 0.0);
}

TEST(BarrierEstimate, ZeroBoundGivesBarrierValues) {
  const CompositeNorm norm(testing::exoskeleton_design().certificate.q_list);
  VertexEstimates est;
  est.estimates = {(Vector(2) << 0.3, 1.0).finished(), (Vector(2) << -0.5, 4.0).finished(),
                   (Vector(2) << 0.1, -0.2).finished()};
  const auto b = barrier_estimate(norm, est, 0.0);
  ASSERT_EQ(b.per_vertex.size(), 3u);
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_DOUBLE_EQ(b.per_vertex[i], barrier_value(norm, est.estimates[i]));
  }
  EXPECT_EQ(b.max_value, *std::max_element(b.per_vertex.begin(), b.per_vertex.end()));
  EXPECT_EQ(b.per_vertex[b.max_index], b.max_value);
}

TEST(BarrierEstimate, RejectsNegativeBoundOrNoVertices) {
  const CompositeNorm norm({Matrix::Identity(2, 2)});
  VertexEstimates est;
  EXPECT_THROW(barrier_estimate(norm, est, 0.0), InvalidArgumentError);
  est.estimates = {Vector::Zero(2)};
  EXPECT_THROW(barrier_estimate(norm, est, -0.1), InvalidArgumentError);
}

TEST(SupervisorState, ValidatesThresholds) {
  EXPECT_NO_THROW(SupervisorState(-0.02, -0.01));
  EXPECT_NO_THROW(SupervisorState(-0.5, 0.0));
  EXPECT_THROW(SupervisorState(-0.01, -0.02), InvalidArgumentError);
  EXPECT_THROW(SupervisorState(-1.0, -0.01), InvalidArgumentError);
  EXPECT_THROW(SupervisorState(-0.02, 0.1), InvalidArgumentError);
  EXPECT_THROW(SupervisorState(-0.02, -0.02), InvalidArgumentError);
}

TEST(Decide, SwitchesOnAtUpperThreshold) {
  const SupervisorState s(-0.02, -0.01);
  const auto d = decide(s, with_max(-0.005));
  EXPECT_EQ(d.source, ControlSource::kBackup);
  EXPECT_EQ(d.state.active(), ControlSource::kBackup);
  EXPECT_EQ(decide(s, with_max(-0.01)).source, ControlSource::kBackup);
  EXPECT_EQ(decide(s, with_max(-0.0100001)).source, ControlSource::kNominal);
}

TEST(Decide, HoldsInsideTheBand) {
  const SupervisorState backup(-0.02, -0.01, ControlSource::kBackup);
  EXPECT_EQ(decide(backup, with_max(-0.015)).source, ControlSource::kBackup);
  const SupervisorState nominal(-0.02, -0.01, ControlSource::kNominal);
  EXPECT_EQ(decide(nominal, with_max(-0.015)).source, ControlSource::kNominal);
}

TEST(Decide, SwitchesOffAtLowerThreshold) {
  const SupervisorState s(-0.02, -0.01, ControlSource::kBackup);
  EXPECT_EQ(decide(s, with_max(-0.03)).source, ControlSource::kNominal);
  EXPECT_EQ(decide(s, with_max(-0.02)).source, ControlSource::kNominal);
  EXPECT_EQ(decide(s, with_max(-0.0199)).source, ControlSource::kBackup);
}

TEST(Decide, DependsOnlyOnMaxAndState) {
  const SupervisorState s(-0.02, -0.01);
  BarrierEstimate a = with_max(-0.012);
  BarrierEstimate b = a;
  b.per_vertex = {-0.9, -0.5, -0.012};
  b.max_index = 2;
  EXPECT_EQ(decide(s, a).source, decide(s, b).source);
  const SupervisorState on = s.with_active(ControlSource::kBackup);
  EXPECT_EQ(decide(on, a).source, decide(on, b).source);
}

TEST(BackupControl, StaticOutputFeedback) {
  EXPECT_DOUBLE_EQ(backup_control(-1.2, 0.5), -0.6);
  EXPECT_EQ(backup_control(-1.2, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(backup_control(-1.2, 1.0), -1.2);
}

TEST(ControlSource, Names) {
  EXPECT_EQ(to_string(ControlSource::kNominal), "nominal");
  EXPECT_EQ(to_string(ControlSource::kBackup), "backup");
}

}  // namespace
}  // namespace rbc

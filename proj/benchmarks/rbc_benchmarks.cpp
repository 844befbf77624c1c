#include <benchmark/benchmark.h>

#include <random>

#include "rbc/rbc.hpp"

namespace {

using rbc::Matrix;
using rbc::Vector;

rbc::UncertainPlant exoskeleton_plant() {
  return rbc::mass_spring_damper(1.0, 12.0, rbc::IntervalCoefficient(4.0, 12.0));
}

rbc::ConstraintSet exoskeleton_constraints() {
  rbc::ConstraintSet c;
  rbc::RowVector f(2);
  f << -1.0, 1.0 / 12.0;
  c.f.push_back(f);
  c.u_max = 1.2;
  c.gain = -1.2;
  return c;
}

std::vector<Vector> exoskeleton_directions() {
  return {Vector::Unit(2, 0), (Vector(2) << 1.0, 12.0).finished()};
}

const rbc::BarrierCertificate& certificate() {
  static const rbc::BarrierCertificate cert = rbc::synthesize_certificate(
      rbc::pldi_vertices(exoskeleton_plant(), -1.2), exoskeleton_constraints(), 0.5,
      exoskeleton_directions());
  return cert;
}

void BM_SynthesizeCertificate(benchmark::State& state) {
  const auto vertices = rbc::pldi_vertices(exoskeleton_plant(), -1.2);
  const auto constraints = exoskeleton_constraints();
  const auto directions = exoskeleton_directions();
  for (auto _ : state) {
    benchmark::DoNotOptimize(rbc::synthesize_certificate(vertices, constraints, 0.5, directions));
  }
}
BENCHMARK(BM_SynthesizeCertificate)->Unit(benchmark::kMillisecond);

void BM_SynthesizeEstimator(benchmark::State& state) {
  const auto& q_list = certificate().q_list;
  for (auto _ : state) benchmark::DoNotOptimize(rbc::synthesize_a0(q_list, 0.5, 10.0));
}
BENCHMARK(BM_SynthesizeEstimator)->Unit(benchmark::kMillisecond);

void BM_CompositeNorm(benchmark::State& state) {
  const rbc::CompositeNorm norm(certificate().q_list);
  const auto method = static_cast<rbc::CompositeMethod>(state.range(0));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal;
  std::vector<Vector> points(256, Vector(2));
  for (auto& p : points) p << normal(rng), normal(rng);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(norm.evaluate(points[i++ % points.size()], method));
  }
}
BENCHMARK(BM_CompositeNorm)
    ->Arg(static_cast<int>(rbc::CompositeMethod::kGoldenSection))
    ->Arg(static_cast<int>(rbc::CompositeMethod::kSdp));

void BM_SimulateTracking(benchmark::State& state) {
  const auto plant = exoskeleton_plant();
  const auto estimator = rbc::synthesize_a0(certificate().q_list, 0.5, 10.0);
  const rbc::SafetySystem system{plant, certificate(), estimator.a_hat, estimator.alpha};
  rbc::Scenario scenario;
  scenario.truth = rbc::mass_spring_damper_instance(1.0, 12.0, 8.0);
  scenario.x0 = Vector::Zero(2);
  scenario.reference = rbc::ReferenceSignal{1.2, 0.05};
  scenario.nominal = rbc::tracking_input(*scenario.reference,
                                         rbc::default_tracker(plant.nominal(), 1.2));
  scenario.duration = static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(rbc::simulate(scenario, system));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 1000);
}
BENCHMARK(BM_SimulateTracking)->Arg(5)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

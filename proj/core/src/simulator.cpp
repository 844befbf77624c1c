#include "rbc/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rbc/errors.hpp"

namespace rbc {

double ReferenceSignal::operator()(double t) const {
  return amplitude * std::sin(2.0 * std::numbers::pi * frequency_hz * t);
}

TrackerConfig default_tracker(const PlantInstance& nominal, double u_limit, double kp) {
  const auto n = nominal.a.size();
  const double dc_gain = nominal.b(n - 1) / nominal.a(n - 1);
  if (!std::isfinite(dc_gain) || dc_gain == 0.0) {
    throw InvalidArgumentError("nominal plant has no usable DC gain for feedforward");
  }
  return {kp, 1.0 / dc_gain, u_limit};
}

double nominal_tracking_input(double t, double y, const ReferenceSignal& reference,
                              const TrackerConfig& tracker) {
  const double ref = reference(t);
  const double u = tracker.kp * (ref - y) + tracker.feedforward * ref;
  return std::clamp(u, -tracker.u_limit, tracker.u_limit);
}

NominalInput zero_input() {
  return [](double, double) { return 0.0; };
}

NominalInput tracking_input(ReferenceSignal reference, TrackerConfig tracker) {
  return [reference, tracker](double t, double y) {
    return nominal_tracking_input(t, y, reference, tracker);
  };
}

double SimulationTrace::max_abs_y() const {
  double m = 0.0;
  for (const auto& row : rows) m = std::max(m, std::abs(row.y));
  return m;
}

double SimulationTrace::max_abs_u() const {
  double m = 0.0;
  for (const auto& row : rows) m = std::max(m, std::abs(row.u_applied));
  return m;
}

int SimulationTrace::switches_to_backup() const {
  int count = 0;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    if (rows[k - 1].source == ControlSource::kNominal && rows[k].source == ControlSource::kBackup) {
      ++count;
    }
  }
  return count;
}

int SimulationTrace::switch_count() const {
  int count = 0;
  for (std::size_t k = 1; k < rows.size(); ++k) {
    if (rows[k - 1].source != rows[k].source) ++count;
  }
  return count;
}

double SimulationTrace::min_margin() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& row : rows) m = std::min(m, -row.b_true);
  return m;
}

SimulationTrace simulate(const Scenario& scenario, const SafetySystem& system) {
  const std::size_t n = system.plant.order();
  const auto dim = static_cast<Eigen::Index>(n);
  if (!(scenario.dt > 0.0)) throw ConfigurationError("time step must be positive");
  if (!(scenario.duration >= 0.0)) throw ConfigurationError("duration must be non-negative");
  if (scenario.x0.size() != dim) throw ConfigurationError("initial state has the wrong dimension");
  if (!system.plant.contains(scenario.truth)) {
    throw ConfigurationError("true plant coefficients lie outside the uncertainty set");
  }
  if (system.certificate.q_list.empty()) throw ConfigurationError("certificate has no matrices");

  std::optional<CompositeNorm> norm;
  try {
    norm.emplace(system.certificate.q_list);
  } catch (const Error& e) {
    throw ConfigurationError(std::string("invalid certificate: ") + e.what());
  }
  if (norm->dimension() != dim) throw ConfigurationError("certificate dimension mismatch");
  const auto containment =
      unit_ball_constraint_check(*norm, system.certificate.constraints, system.check_tol);
  if (!containment.ok) {
    throw ConfigurationError("certificate unit ball violates the constraint set (margin " +
                             std::to_string(containment.worst_margin) + ")");
  }
  if (system.a_hat.size() != dim) throw ConfigurationError("a_hat has the wrong dimension");

  const Matrix a0 = observable_canonical(system.a_hat, Vector::Zero(dim)).A;
  std::optional<EstimatorBank> bank;
  try {
    bank.emplace(a0, system.alpha, system.eps0_norm, system.certificate.q_list, system.check_tol);
  } catch (const Error& e) {
    throw ConfigurationError(std::string("invalid estimator: ") + e.what());
  }
  std::optional<SupervisorState> supervisor;
  try {
    supervisor.emplace(system.lower_threshold, system.upper_threshold);
  } catch (const Error& e) {
    throw ConfigurationError(std::string("invalid supervisor thresholds: ") + e.what());
  }

  const CornerSet corners = enumerate_corners(system.plant, system.degeneracy_tol);
  const auto realization = observable_canonical(scenario.truth.a, scenario.truth.b);
  const double gain = system.certificate.gain;
  const NominalInput nominal = scenario.nominal ? scenario.nominal : zero_input();

  const auto steps = static_cast<std::size_t>(std::llround(scenario.duration / scenario.dt));
  SimulationTrace trace;
  trace.order = n;
  trace.vertex_count = corners.count();
  trace.rows.reserve(steps + 1);

  Vector x = scenario.x0;
  for (std::size_t k = 0;; ++k) {
    const double t = static_cast<double>(k) * scenario.dt;
    const double y = realization.c0.dot(x);
    const VertexEstimates estimates = bank->vertex_states(corners, system.a_hat);
    const double bound = bank->error_bound();
    BarrierEstimate estimate = barrier_estimate(*norm, estimates, bound);
    const double u_nominal = nominal(t, y);

    ControlSource source = ControlSource::kNominal;
    if (scenario.always_backup) {
      source = ControlSource::kBackup;
    } else if (scenario.supervisor_enabled) {
      const Decision decision = decide(*supervisor, estimate);
      supervisor.emplace(decision.state);
      source = decision.source;
    }

    TraceRow row;
    row.t = t;
    row.x = x;
    row.y = y;
    row.u_nominal = u_nominal;
    row.source = source;
    row.u_applied = source == ControlSource::kBackup ? backup_control(gain, y) : u_nominal;
    row.b_true = barrier_value(*norm, x);
    row.b_hat_max = estimate.max_value;
    row.err_bound = bound;
    row.b_hat = std::move(estimate.per_vertex);
    trace.rows.push_back(std::move(row));

    if (k == steps) break;

    StageInputs stages;
    int stage = 0;
    const auto plant_rate = [&](const Vector& state) -> Vector {
      const double ys = realization.c0.dot(state);
      const double us = source == ControlSource::kBackup ? backup_control(gain, ys) : u_nominal;
      stages.y[static_cast<std::size_t>(stage)] = ys;
      stages.u[static_cast<std::size_t>(stage)] = us;
      ++stage;
      return realization.A * state + realization.b_u * us;
    };
    x = rk4_step(plant_rate, x, scenario.dt);
    bank->step(stages, scenario.dt);
  }
  return trace;
}

}  // namespace rbc

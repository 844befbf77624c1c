#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "rbc/estimator.hpp"
#include "rbc/model.hpp"
#include "rbc/norms.hpp"
#include "rbc/rk4.hpp"
#include "rbc/supervisor.hpp"
#include "rbc/synthesis.hpp"

namespace rbc {

/// amplitude * sin(2 pi frequency t)
struct ReferenceSignal {
  double amplitude = 0.0;
  double frequency_hz = 0.0;

  double operator()(double t) const;
};

/// Proportional tracker with static feedforward, saturated at u_limit.
struct TrackerConfig {
  double kp = 2.0;
  /// Inverse DC gain of the nominal plant, so y -> y_ref at steady state.
  double feedforward = 1.0;
  double u_limit = std::numeric_limits<double>::infinity();
};

TrackerConfig default_tracker(const PlantInstance& nominal, double u_limit, double kp = 2.0);

/// kp (y_ref(t) - y) + feedforward * y_ref(t), clipped to [-u_limit, u_limit].
double nominal_tracking_input(double t, double y, const ReferenceSignal& reference,
                              const TrackerConfig& tracker);

/// Nominal input as a function of time and measured output.
using NominalInput = std::function<double(double t, double y)>;

NominalInput zero_input();
NominalInput tracking_input(ReferenceSignal reference, TrackerConfig tracker);

struct Scenario {
  std::string name;
  PlantInstance truth;
  Vector x0;
  NominalInput nominal;  // empty means zero input
  std::optional<ReferenceSignal> reference;
  double duration = 0.0;
  double dt = 1e-3;
  bool supervisor_enabled = true;
  bool always_backup = false;
};

/// Everything synthesized offline that the online loop needs.
struct SafetySystem {
  UncertainPlant plant;
  BarrierCertificate certificate;
  Vector a_hat;
  double alpha = 0.0;
  double eps0_norm = 1.0;
  double lower_threshold = -0.02;
  double upper_threshold = -0.01;
  double degeneracy_tol = kDefaultDegeneracyTolerance;
  double check_tol = 1e-7;
};

struct TraceRow {
  double t = 0.0;
  Vector x;
  double y = 0.0;
  double u_applied = 0.0;
  double u_nominal = 0.0;
  ControlSource source = ControlSource::kNominal;
  double b_true = 0.0;
  double b_hat_max = 0.0;
  double err_bound = 0.0;
  std::vector<double> b_hat;
};

struct SimulationTrace {
  std::size_t order = 0;
  std::size_t vertex_count = 0;
  std::vector<TraceRow> rows;

  double max_abs_y() const;
  double max_abs_u() const;
  /// Transitions nominal -> backup.
  int switches_to_backup() const;
  /// All source transitions.
  int switch_count() const;
  /// min over rows of -B_true.
  double min_margin() const;
};

/// Co-simulates the plant x' = A x + b u and the estimator bank with a shared
/// RK4 step. At each grid point the barrier estimate and supervisor decision
/// are evaluated and one row is recorded; the chosen input is then applied
/// over the following step (the backup law u = k y acts continuously, the
/// nominal input is held).
///
/// Throws ConfigurationError on inconsistent inputs before integrating.
SimulationTrace simulate(const Scenario& scenario, const SafetySystem& system);

}  // namespace rbc

#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "rbc/estimator.hpp"
#include "rbc/norms.hpp"

namespace rbc {

enum class ControlSource { kNominal, kBackup };

std::string_view to_string(ControlSource source);

/// Measurable upper bound on the barrier, one entry per estimate vertex:
/// ||x_hat_i||_c + bound - 1.
struct BarrierEstimate {
  std::vector<double> per_vertex;
  double max_value = 0.0;
  std::size_t max_index = 0;
};

BarrierEstimate barrier_estimate(const CompositeNorm& norm, const VertexEstimates& estimates,
                                 double bound);

/// Hysteresis thresholds with -1 < lower < upper <= 0 and the active source.
class SupervisorState {
 public:
  SupervisorState(double lower, double upper, ControlSource active = ControlSource::kNominal);

  ControlSource active() const { return active_; }
  double lower() const { return lower_; }
  double upper() const { return upper_; }

  SupervisorState with_active(ControlSource source) const;

 private:
  double lower_;
  double upper_;
  ControlSource active_;
};

struct Decision {
  SupervisorState state;
  ControlSource source;
};

/// nominal -> backup once max >= upper; backup -> nominal once max <= lower;
/// otherwise the active source is kept.
Decision decide(const SupervisorState& state, const BarrierEstimate& estimate);

/// Static output feedback u = gain * y.
inline double backup_control(double gain, double y) { return gain * y; }

}  // namespace rbc

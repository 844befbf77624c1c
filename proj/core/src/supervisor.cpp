#include "rbc/supervisor.hpp"

#include <cmath>

#include "rbc/errors.hpp"

namespace rbc {

std::string_view to_string(ControlSource source) {
  return source == ControlSource::kBackup ? "backup" : "nominal";
}

BarrierEstimate barrier_estimate(const CompositeNorm& norm, const VertexEstimates& estimates,
                                 double bound) {
  if (!(bound >= 0.0)) throw InvalidArgumentError("error bound must be non-negative");
  if (estimates.estimates.empty()) throw InvalidArgumentError("no vertex estimates");
  BarrierEstimate out;
  out.per_vertex.reserve(estimates.estimates.size());
  for (std::size_t i = 0; i < estimates.estimates.size(); ++i) {
    const double value = norm(estimates.estimates[i]) + bound - 1.0;
    out.per_vertex.push_back(value);
    if (i == 0 || value > out.max_value) {
      out.max_value = value;
      out.max_index = i;
    }
  }
  return out;
}

SupervisorState::SupervisorState(double lower, double upper, ControlSource active)
    : lower_(lower), upper_(upper), active_(active) {
  if (!(-1.0 < lower_ && lower_ < upper_ && upper_ <= 0.0)) {
    throw InvalidArgumentError("thresholds must satisfy -1 < lower < upper <= 0");
  }
}

SupervisorState SupervisorState::with_active(ControlSource source) const {
  return SupervisorState(lower_, upper_, source);
}

Decision decide(const SupervisorState& state, const BarrierEstimate& estimate) {
  ControlSource next = state.active();
  if (state.active() == ControlSource::kNominal && estimate.max_value >= state.upper()) {
    next = ControlSource::kBackup;
  } else if (state.active() == ControlSource::kBackup && estimate.max_value <= state.lower()) {
    next = ControlSource::kNominal;
  }
  return {state.with_active(next), next};
}

}  // namespace rbc

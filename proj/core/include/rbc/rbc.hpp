#pragma once

#include "rbc/errors.hpp"
#include "rbc/estimator.hpp"
#include "rbc/model.hpp"
#include "rbc/norms.hpp"
#include "rbc/rk4.hpp"
#include "rbc/sdp.hpp"
#include "rbc/simulator.hpp"
#include "rbc/supervisor.hpp"
#include "rbc/synthesis.hpp"

namespace rbc {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace rbc

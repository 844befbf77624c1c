#pragma once

namespace rbc {

/// One classical fourth-order Runge-Kutta step of x' = f(x).
template <typename State, typename Derivative>
State rk4_step(Derivative&& f, const State& x, double dt) {
  const State k1 = f(x);
  const State k2 = f(State(x + (0.5 * dt) * k1));
  const State k3 = f(State(x + (0.5 * dt) * k2));
  const State k4 = f(State(x + dt * k3));
  return State(x + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

}  // namespace rbc

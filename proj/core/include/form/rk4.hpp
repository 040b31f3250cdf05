#pragma once

#include <utility>

namespace form {

/// One classical Runge-Kutta step for y' = f(t, y). `State` needs vector-space
/// arithmetic (Eigen vectors, doubles).
template <class State, class Deriv>
State rk4_step(const State& y, double t, double h, Deriv&& f) {
  const State k1 = f(t, y);
  const State k2 = f(t + 0.5 * h, State(y + (0.5 * h) * k1));
  const State k3 = f(t + 0.5 * h, State(y + (0.5 * h) * k2));
  const State k4 = f(t + h, State(y + h * k3));
  return State(y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

}  // namespace form

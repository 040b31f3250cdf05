#pragma once

#include <functional>
#include <string>

#include "form/relativity.hpp"

namespace form {

/// Interpolation schedule x_t = alpha(t) x1 + sigma(t) x0 on [0, T], carried
/// together with its first and second derivatives.
struct Schedule {
  std::string name;
  std::function<double(double)> alpha, sigma;
  std::function<double(double)> alpha_dot, sigma_dot;
  std::function<double(double)> alpha_ddot, sigma_ddot;
  double T = 1.0;
};

/// alpha = t, sigma = 1 - t on [0, 1].
Schedule linear_schedule();

/// alpha = sin t, sigma = cos t on [0, pi/2].
Schedule trigflow_schedule();

struct InterpolantPoint {
  VecD x;
  VecD x_dot;
  VecD x_ddot;
};

InterpolantPoint interpolate(const VecD& x0, const VecD& x1, double t, const Schedule& s);

/// alpha_dot x1 + sigma_dot x0, the regression target of flow matching.
VecD fm_target_velocity(const VecD& x0, const VecD& x1, double t, const Schedule& s);

/// Relativistic force along the TrigFlow path (m = 1):
///   gamma x_ddot + gamma^3 <x_dot, x_ddot>/c^2 x_dot
/// with x_dot = cos t x1 - sin t x0 and x_ddot = -x_t.
VecD trigflow_force(const VecD& x0, const VecD& x1, double t, const PhysicsConfig& cfg);

}  // namespace form

#include "form/interpolants.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "form/errors.hpp"

namespace form {
namespace {

void require_in_range(double t, double T) {
  if (!(t >= 0.0 && t <= T)) {
    throw RangeError("schedule time " + std::to_string(t) + " outside [0, " +
                     std::to_string(T) + "]");
  }
}

}  // namespace

Schedule linear_schedule() {
  Schedule s;
  s.name = "linear";
  s.alpha = [](double t) { return t; };
  s.sigma = [](double t) { return 1.0 - t; };
  s.alpha_dot = [](double) { return 1.0; };
  s.sigma_dot = [](double) { return -1.0; };
  s.alpha_ddot = [](double) { return 0.0; };
  s.sigma_ddot = [](double) { return 0.0; };
  s.T = 1.0;
  return s;
}

Schedule trigflow_schedule() {
  Schedule s;
  s.name = "trigflow";
  s.alpha = [](double t) { return std::sin(t); };
  s.sigma = [](double t) { return std::cos(t); };
  s.alpha_dot = [](double t) { return std::cos(t); };
  s.sigma_dot = [](double t) { return -std::sin(t); };
  s.alpha_ddot = [](double t) { return -std::sin(t); };
  s.sigma_ddot = [](double t) { return -std::cos(t); };
  s.T = std::numbers::pi / 2.0;
  return s;
}

InterpolantPoint interpolate(const VecD& x0, const VecD& x1, double t, const Schedule& s) {
  require_in_range(t, s.T);
  if (x0.size() != x1.size()) throw ShapeError("interpolate: endpoint dimensions differ");
  // The TrigFlow endpoint pi/2 does not give cos == 0 exactly in floating point.
  if (t == s.T) return {x1, s.alpha_dot(t) * x1 + s.sigma_dot(t) * x0,
                        s.alpha_ddot(t) * x1 + s.sigma_ddot(t) * x0};
  return {s.alpha(t) * x1 + s.sigma(t) * x0,
          s.alpha_dot(t) * x1 + s.sigma_dot(t) * x0,
          s.alpha_ddot(t) * x1 + s.sigma_ddot(t) * x0};
}

VecD fm_target_velocity(const VecD& x0, const VecD& x1, double t, const Schedule& s) {
  require_in_range(t, s.T);
  if (x0.size() != x1.size()) throw ShapeError("fm_target_velocity: dimensions differ");
  return s.alpha_dot(t) * x1 + s.sigma_dot(t) * x0;
}

VecD trigflow_force(const VecD& x0, const VecD& x1, double t, const PhysicsConfig& cfg) {
  require_in_range(t, std::numbers::pi / 2.0);
  if (x0.size() != x1.size()) throw ShapeError("trigflow_force: dimensions differ");
  const double s = std::sin(t);
  const double c = std::cos(t);
  const VecD x_dot = c * x1 - s * x0;
  const VecD x_ddot = -(s * x1 + c * x0);
  const double c2 = cfg.c * cfg.c;
  const double speed_sq = x_dot.squaredNorm();
  if (!(speed_sq < c2)) {
    throw DomainError("TrigFlow path speed reaches c; endpoints too far apart for this c");
  }
  const double gamma = 1.0 / std::sqrt(1.0 - speed_sq / c2);
  // gamma^3 / c^2 == gamma / (c^2 - |x_dot|^2)
  return cfg.m * (gamma * x_ddot + (gamma * x_dot.dot(x_ddot) / (c2 - speed_sq)) * x_dot);
}

}  // namespace form

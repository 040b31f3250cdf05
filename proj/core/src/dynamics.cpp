#include "form/dynamics.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "form/errors.hpp"
#include "form/rk4.hpp"

namespace form {
namespace {

bool all_finite(const VecD& v) { return v.allFinite(); }

}  // namespace

void UnitSystem::validate() const {
  if (!(meters_per_du > 0.0)) throw DataError("unit system: meters_per_du must be positive");
  if (c_du != kSpeedOfLightSi / meters_per_du) {
    throw DataError("unit system: c_du must equal 3e8 / meters_per_du");
  }
}

ForceSchedule ForceSchedule::zero() { return constant(0.0, 0.0); }

ForceSchedule ForceSchedule::constant(double f_par, double f_perp) {
  return {[f_par](double) { return f_par; }, [f_perp](double) { return f_perp; }};
}

ForceField comoving_field(ForceSchedule fs, Handedness h) {
  return [fs = std::move(fs), h](double t, const VecD&, const VecD& v) -> VecD {
    const ForceComponents fc{fs.f_par(t), fs.f_perp(t)};
    if (!std::isfinite(fc.f_par) || !std::isfinite(fc.f_perp))
      throw NonFiniteError("force schedule is not finite at t = " + std::to_string(t));
    if (fc.f_par == 0.0 && fc.f_perp == 0.0) return VecD::Zero(v.size());
    return compose_from_components(fc, v, h);
  };
}

RelativisticState relativistic_rk4_step(const RelativisticState& s, double t, double h,
                                        const ForceField& force, const PhysicsConfig& cfg) {
  const Eigen::Index d = s.x.size();
  VecD y(2 * d);
  y << s.x, momentum(s.v, cfg) / cfg.m;
  auto deriv = [&](double tt, const VecD& yy) -> VecD {
    const VecD x = yy.head(d);
    const VecD v = velocity_from_momentum(yy.tail(d), cfg.c);
    VecD dy(2 * d);
    dy << v, force(tt, x, v) / cfg.m;
    return dy;
  };
  const VecD next = rk4_step(y, t, h, deriv);
  if (!all_finite(next)) throw NonFiniteError("non-finite state after RK4 step at t = " +
                                              std::to_string(t));
  return {next.head(d), velocity_from_momentum(next.tail(d), cfg.c)};
}

TrajectoryRecord simulate_trajectory(const VecD& x0, const VecD& v0, const ForceSchedule& fs,
                                     double duration, std::size_t n_steps,
                                     const PhysicsConfig& cfg) {
  cfg.validate();
  if (n_steps < 2) throw DataError("simulate_trajectory: n_steps must be >= 2");
  if (!(duration > 0.0)) throw DataError("simulate_trajectory: duration must be positive");
  if (x0.size() != v0.size()) throw ShapeError("simulate_trajectory: x0/v0 dimensions differ");
  lorentz_factor(v0, cfg);  // rejects |v0| >= c

  const ForceField field = comoving_field(fs, cfg.perp);
  const double h = duration / static_cast<double>(n_steps);

  TrajectoryRecord rec;
  rec.steps.reserve(n_steps + 1);
  RelativisticState state{x0, v0};
  for (std::size_t i = 0; i <= n_steps; ++i) {
    // i * h keeps the grid uniform without accumulated rounding.
    const double t = static_cast<double>(i) * h;
    StepRecord step;
    step.t = t;
    step.x = state.x;
    step.v = state.v;
    step.f_par = fs.f_par(t);
    step.f_perp = fs.f_perp(t);
    step.f = field(t, state.x, state.v);
    step.a = acceleration_from_force(state.v, step.f, cfg);
    rec.steps.push_back(std::move(step));
    if (i < n_steps) state = relativistic_rk4_step(state, t, h, field, cfg);
  }
  return rec;
}

}  // namespace form

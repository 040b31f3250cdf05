#pragma once

#include <functional>
#include <string>
#include <vector>

#include "form/relativity.hpp"

namespace form {

/// Distance-unit convention. One du is 0.1 light-second, which puts c at 10 du/s.
struct UnitSystem {
  static constexpr double kSpeedOfLightSi = 3e8;  // m/s

  double meters_per_du = 3e7;
  double c_du = 10.0;
  std::string length_label = "du (0.1 light-second)";
  std::string time_label = "s";

  /// SI acceleration-scale force (m/s^2 per unit mass) to du/s^2.
  double from_si(double value) const { return value / meters_per_du; }
  /// Throws DataError unless c_du == 3e8 / meters_per_du.
  void validate() const;
};

/// Force components in the co-moving frame as functions of lab time.
struct ForceSchedule {
  std::function<double(double)> f_par;
  std::function<double(double)> f_perp;

  static ForceSchedule zero();
  static ForceSchedule constant(double f_par, double f_perp);
};

/// Lab-frame force as a function of (t, x, v).
using ForceField = std::function<VecD(double t, const VecD& x, const VecD& v)>;

struct StepRecord {
  double t = 0.0;
  VecD x, v, a, f;
  double f_par = 0.0;
  double f_perp = 0.0;
};

/// One particle's path on a uniform grid of n_steps + 1 times.
struct TrajectoryRecord {
  std::size_t index = 0;
  std::vector<StepRecord> steps;

  double duration() const { return steps.back().t - steps.front().t; }
  std::size_t n_steps() const { return steps.size() - 1; }
};

struct RelativisticState {
  VecD x;
  VecD v;
};

/// Advance (x, v) by one RK4 step of x' = v, d(gamma v)/dt = f/m. The stages run
/// in momentum variables, so the returned velocity is always below c.
RelativisticState relativistic_rk4_step(const RelativisticState& s, double t, double h,
                                        const ForceField& force, const PhysicsConfig& cfg);

/// ForceField applying `fs` in the co-moving frame of the current velocity.
/// Zero components are applied without touching the (possibly undefined) frame.
ForceField comoving_field(ForceSchedule fs, Handedness h);

TrajectoryRecord simulate_trajectory(const VecD& x0, const VecD& v0, const ForceSchedule& fs,
                                     double duration, std::size_t n_steps,
                                     const PhysicsConfig& cfg);

}  // namespace form

#pragma once

#include <Eigen/Core>

namespace form {

/// Spatial vector of runtime dimension. Positions (du), velocities (du/s),
/// accelerations (du/s^2) and forces all share this type.
using VecD = Eigen::VectorXd;

/// Orientation of the perpendicular axis relative to the velocity direction in 2-D.
enum class Handedness { kCounterClockwise, kClockwise };

struct PhysicsConfig {
  double c = 10.0;  // speed of light, du/s
  double m = 1.0;   // rest mass
  Handedness perp = Handedness::kCounterClockwise;

  /// Throws DataError unless c > 0 and m > 0.
  void validate() const;
};

struct ParticleState {
  double t = 0.0;
  VecD x;
  VecD v;
};

/// Force split in the frame co-moving with the velocity direction (2-D).
struct ForceComponents {
  double f_par = 0.0;
  double f_perp = 0.0;
};

/// Below this speed the direction of v is considered undefined.
inline constexpr double kDegenerateSpeed = 1e-12;

/// 1 / sqrt(1 - |v|^2 / c^2). Throws DomainError when |v| >= c.
double lorentz_factor(const VecD& v, const PhysicsConfig& cfg);

/// Lorentz factor of a momentum-per-unit-mass vector u = gamma * v; valid for any u.
double lorentz_factor_from_momentum(const VecD& u, double c);

inline double proper_time_increment(double dt, double gamma) { return dt / gamma; }

/// m * gamma * v.
VecD momentum(const VecD& v, const PhysicsConfig& cfg);

/// Velocity recovered from u = gamma * v. Always strictly slower than c.
VecD velocity_from_momentum(const VecD& u, double c);

/// Force needed to produce lab acceleration `a` at velocity `v`:
/// m (gamma a + gamma^3 <v,a>/c^2 v), i.e. d(m gamma v)/dt.
VecD relativistic_force(const VecD& v, const VecD& a, const PhysicsConfig& cfg);

/// Exact inverse of relativistic_force: (f - <v,f>/c^2 v) / (m gamma).
VecD acceleration_from_force(const VecD& v, const VecD& f, const PhysicsConfig& cfg);

/// Unit vector along v rotated by +90 degrees (or -90 for kClockwise). 2-D only.
VecD perpendicular_direction(const VecD& v, Handedness h = Handedness::kCounterClockwise);

ForceComponents decompose_parallel_perp(const VecD& f, const VecD& v,
                                        Handedness h = Handedness::kCounterClockwise);

VecD compose_from_components(const ForceComponents& fc, const VecD& v,
                             Handedness h = Handedness::kCounterClockwise);

/// d/dt of |v|^2 / 2 under force f: <f,v>/(m gamma) * (1 - |v|^2/c^2).
double speed_sq_derivative(const VecD& v, const VecD& f, const PhysicsConfig& cfg);

}  // namespace form

#include "form/relativity.hpp"

#include <cmath>
#include <string>

#include "form/errors.hpp"

namespace form {
namespace {

void require_subluminal(const VecD& v, double c) {
  const double speed_sq = v.squaredNorm();
  if (!std::isfinite(speed_sq) || speed_sq >= c * c) {
    throw DomainError("speed " + std::to_string(std::sqrt(speed_sq)) +
                      " is not below c = " + std::to_string(c));
  }
}

void require_2d(const VecD& v) {
  if (v.size() != 2) {
    throw ShapeError("co-moving decomposition is defined in 2-D only, got dimension " +
                     std::to_string(v.size()));
  }
}

VecD unit_direction(const VecD& v) {
  require_2d(v);
  const double speed = v.norm();
  if (!(speed > kDegenerateSpeed)) {
    throw DegenerateVelocityError("velocity direction undefined at speed " +
                                  std::to_string(speed));
  }
  return v / speed;
}

}  // namespace

void PhysicsConfig::validate() const {
  if (!(c > 0.0) || !std::isfinite(c)) throw DataError("physics: c must be positive");
  if (!(m > 0.0) || !std::isfinite(m)) throw DataError("physics: m must be positive");
}

double lorentz_factor(const VecD& v, const PhysicsConfig& cfg) {
  require_subluminal(v, cfg.c);
  return 1.0 / std::sqrt(1.0 - v.squaredNorm() / (cfg.c * cfg.c));
}

double lorentz_factor_from_momentum(const VecD& u, double c) {
  return std::sqrt(1.0 + u.squaredNorm() / (c * c));
}

VecD momentum(const VecD& v, const PhysicsConfig& cfg) {
  return cfg.m * lorentz_factor(v, cfg) * v;
}

VecD velocity_from_momentum(const VecD& u, double c) {
  return u / lorentz_factor_from_momentum(u, c);
}

VecD relativistic_force(const VecD& v, const VecD& a, const PhysicsConfig& cfg) {
  const double gamma = lorentz_factor(v, cfg);
  const double c2 = cfg.c * cfg.c;
  return cfg.m * (gamma * a + (gamma * gamma * gamma * v.dot(a) / c2) * v);
}

VecD acceleration_from_force(const VecD& v, const VecD& f, const PhysicsConfig& cfg) {
  const double gamma = lorentz_factor(v, cfg);
  const double c2 = cfg.c * cfg.c;
  return (f - (v.dot(f) / c2) * v) / (cfg.m * gamma);
}

VecD perpendicular_direction(const VecD& v, Handedness h) {
  const VecD dir = unit_direction(v);
  VecD perp(2);
  if (h == Handedness::kCounterClockwise) {
    perp << -dir[1], dir[0];
  } else {
    perp << dir[1], -dir[0];
  }
  return perp;
}

ForceComponents decompose_parallel_perp(const VecD& f, const VecD& v, Handedness h) {
  require_2d(f);
  const VecD dir = unit_direction(v);
  return {f.dot(dir), f.dot(perpendicular_direction(v, h))};
}

VecD compose_from_components(const ForceComponents& fc, const VecD& v, Handedness h) {
  return fc.f_par * unit_direction(v) + fc.f_perp * perpendicular_direction(v, h);
}

double speed_sq_derivative(const VecD& v, const VecD& f, const PhysicsConfig& cfg) {
  const double gamma = lorentz_factor(v, cfg);
  return f.dot(v) / (cfg.m * gamma) * (1.0 - v.squaredNorm() / (cfg.c * cfg.c));
}

}  // namespace form

#include "form/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "form/errors.hpp"

namespace form {
namespace {

void require_finite(const VecD& v, double t, const char* what) {
  if (!v.allFinite()) {
    throw NonFiniteError(std::string(what) + ": non-finite state at t = " + std::to_string(t));
  }
}

void require_steps(std::size_t M, double horizon) {
  if (M < 1) throw DataError("sampler: M must be >= 1");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw DataError("sampler: horizon must be positive");
  }
}

void require_method(const TrainedModel& m, Method want) {
  if (m.method != want) {
    throw DataError("sampler for " + display_name(want) + " given a " + display_name(m.method) +
                    " model");
  }
}

double horizon_of(const TrainedModel& m, const SamplerConfig& sc) {
  return sc.horizon.value_or(m.duration);
}

VecD rotate2(const VecD& v, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  VecD out(2);
  out << c * v[0] - s * v[1], s * v[0] + c * v[1];
  return out;
}

VecD comoving_velocity_step(const VecD& v, const ForceComponents& fc, double d,
                            const PhysicsConfig& cfg) {
  const double speed = v.norm();
  const double gamma = lorentz_factor(v, cfg);
  const double turn_sign = cfg.perp == Handedness::kCounterClockwise ? 1.0 : -1.0;
  const double p_next = gamma * speed + d * fc.f_par / cfg.m;
  const double angle = turn_sign * d * fc.f_perp / (cfg.m * gamma * speed);
  const VecD u_next = p_next * rotate2(v / speed, angle);
  return velocity_from_momentum(u_next, cfg.c);
}

}  // namespace

std::string to_string(FormIntegrator i) {
  return i == FormIntegrator::kTrapezoid ? "trapezoid" : "rk4";
}

FormIntegrator form_integrator_from_string(const std::string& name) {
  if (name == "trapezoid") return FormIntegrator::kTrapezoid;
  if (name == "rk4") return FormIntegrator::kRk4;
  throw DataError("unknown ForM integrator '" + name + "'");
}

void SamplerConfig::validate() const {
  if (M < 1) throw DataError("sampler: M must be >= 1");
  if (horizon && !(*horizon > 0.0)) throw DataError("sampler: horizon must be positive");
  if (init_velocity == InitVelocityRule::kExplicit && explicit_velocity.size() == 0) {
    throw DataError("sampler: explicit initial velocity rule without a velocity");
  }
}

double SamplePath::max_speed() const {
  double best = 0.0;
  for (const auto& vel : v) best = std::max(best, vel.norm());
  return best;
}

SamplePath sample_o1(const VelocityPredictor& u1, const VecD& x0, std::size_t M,
                     double horizon) {
  require_steps(M, horizon);
  const double d = horizon / static_cast<double>(M);
  SamplePath path;
  path.t.reserve(M + 1);
  path.x.reserve(M + 1);
  VecD x = x0;
  path.t.push_back(0.0);
  path.x.push_back(x);
  for (std::size_t n = 0; n < M; ++n) {
    const double t = static_cast<double>(n) * d;
    x += d * u1(x, t);
    require_finite(x, t + d, "sample_o1");
    path.t.push_back(static_cast<double>(n + 1) * d);
    path.x.push_back(x);
  }
  return path;
}

SamplePath sample_o1o2(const VelocityPredictor& u1, const AccelerationPredictor& u2,
                       const VecD& x0, std::size_t M, double horizon) {
  require_steps(M, horizon);
  const double d = horizon / static_cast<double>(M);
  SamplePath path;
  path.t.reserve(M + 1);
  path.x.reserve(M + 1);
  VecD x = x0;
  path.t.push_back(0.0);
  path.x.push_back(x);
  for (std::size_t n = 0; n < M; ++n) {
    const double t = static_cast<double>(n) * d;
    const VecD vel = u1(x, t);
    x += d * vel + (0.5 * d * d) * u2(vel, x, t);
    require_finite(x, t + d, "sample_o1o2");
    path.t.push_back(static_cast<double>(n + 1) * d);
    path.x.push_back(x);
  }
  return path;
}

SamplePath sample_form(const ForcePredictor& force, const VecD& x0, const VecD& v0,
                       std::size_t M, double horizon, const PhysicsConfig& physics,
                       VelocityUpdate update, bool lab_frame_fallback) {
  require_steps(M, horizon);
  physics.validate();
  if (x0.size() != 2 || v0.size() != 2) throw ShapeError("sample_form: 2-D states only");
  lorentz_factor(v0, physics);
  const double d = horizon / static_cast<double>(M);
  SamplePath path;
  path.t.reserve(M + 1);
  path.x.reserve(M + 1);
  path.v.reserve(M + 1);
  VecD x_prev = x0;
  VecD v_prev = v0;
  path.t.push_back(0.0);
  path.x.push_back(x_prev);
  path.v.push_back(v_prev);
  for (std::size_t n = 0; n < M; ++n) {
    const double t = static_cast<double>(n) * d;
    const ForceComponents fc = force(x_prev, t);
    VecD v;
    if (fc.f_par == 0.0 && fc.f_perp == 0.0) {
      v = v_prev;
    } else if (v_prev.norm() <= kDegenerateSpeed) {
      if (!lab_frame_fallback) {
        throw DegenerateVelocityError("sample_form: zero velocity with nonzero force at t = " +
                                      std::to_string(t));
      }
      VecD f(2);
      f << fc.f_par, fc.f_perp;
      v = velocity_from_momentum(momentum(v_prev, physics) / physics.m + d * f / physics.m,
                                 physics.c);
    } else if (update == VelocityUpdate::kCoMoving) {
      v = comoving_velocity_step(v_prev, fc, d, physics);
    } else {
      const VecD f = compose_from_components(fc, v_prev, physics.perp);
      v = v_prev + d * acceleration_from_force(v_prev, f, physics);
    }
    const VecD x = x_prev + d * 0.5 * (v + v_prev);
    require_finite(x, t + d, "sample_form");
    require_finite(v, t + d, "sample_form");
    path.t.push_back(static_cast<double>(n + 1) * d);
    path.x.push_back(x);
    path.v.push_back(v);
    x_prev = x;
    v_prev = v;
  }
  return path;
}

SamplePath ode_solve(const ForceField& field, const VecD& x0, const VecD& v0, std::size_t M,
                     double horizon, const PhysicsConfig& physics) {
  require_steps(M, horizon);
  physics.validate();
  lorentz_factor(v0, physics);
  const double d = horizon / static_cast<double>(M);
  SamplePath path;
  RelativisticState state{x0, v0};
  path.t.push_back(0.0);
  path.x.push_back(state.x);
  path.v.push_back(state.v);
  for (std::size_t n = 0; n < M; ++n) {
    const double t = static_cast<double>(n) * d;
    state = relativistic_rk4_step(state, t, d, field, physics);
    path.t.push_back(static_cast<double>(n + 1) * d);
    path.x.push_back(state.x);
    path.v.push_back(state.v);
  }
  return path;
}

VecD starting_velocity(const TrainedModel& model, const VecD& x0, const SamplerConfig& sc) {
  switch (sc.init_velocity) {
    case InitVelocityRule::kDatasetMatched: return initial_velocity(model.dataset, x0);
    case InitVelocityRule::kZero: return VecD::Zero(x0.size());
    case InitVelocityRule::kExplicit:
      if (sc.explicit_velocity.size() != x0.size()) {
        throw ShapeError("explicit initial velocity has the wrong dimension");
      }
      return sc.explicit_velocity;
  }
  throw DataError("unknown initial velocity rule");
}

SamplePath sample_o1(const TrainedModel& model, const VecD& x0, const SamplerConfig& sc) {
  require_method(model, Method::kO1);
  sc.validate();
  return sample_o1(velocity_predictor(model), x0, sc.M, horizon_of(model, sc));
}

SamplePath sample_o1o2(const TrainedModel& model, const VecD& x0, const SamplerConfig& sc) {
  require_method(model, Method::kO1O2);
  sc.validate();
  return sample_o1o2(velocity_predictor(model), acceleration_predictor(model), x0, sc.M,
                     horizon_of(model, sc));
}

SamplePath sample_form(const TrainedModel& model, const VecD& x0, const SamplerConfig& sc) {
  require_method(model, Method::kForm);
  sc.validate();
  return sample_form(force_predictor(model), x0, starting_velocity(model, x0, sc), sc.M,
                     horizon_of(model, sc), model.physics, sc.velocity_update,
                     sc.lab_frame_fallback);
}

SamplePath ode_solve(const TrainedModel& model, const VecD& x0, const SamplerConfig& sc) {
  require_method(model, Method::kForm);
  sc.validate();
  const ForcePredictor predict = force_predictor(model);
  const Handedness h = model.physics.perp;
  const ForceField field = [&predict, h](double t, const VecD& x, const VecD& v) -> VecD {
    const ForceComponents fc = predict(x, t);
    if (fc.f_par == 0.0 && fc.f_perp == 0.0) return VecD::Zero(v.size());
    return compose_from_components(fc, v, h);
  };
  return ode_solve(field, x0, starting_velocity(model, x0, sc), sc.M, horizon_of(model, sc),
                   model.physics);
}

SamplePath sample(const TrainedModel& model, const VecD& x0, const SamplerConfig& sc) {
  switch (model.method) {
    case Method::kO1: return sample_o1(model, x0, sc);
    case Method::kO1O2: return sample_o1o2(model, x0, sc);
    case Method::kForm:
      return sc.form_integrator == FormIntegrator::kRk4 ? ode_solve(model, x0, sc)
                                                        : sample_form(model, x0, sc);
  }
  throw DataError("unknown method");
}

}  // namespace form

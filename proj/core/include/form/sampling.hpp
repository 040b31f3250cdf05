#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "form/dynamics.hpp"
#include "form/training.hpp"

namespace form {

/// How the ForM sampler picks the starting velocity.
enum class InitVelocityRule { kDatasetMatched, kZero, kExplicit };

/// Velocity update inside the ForM sampler.
///  kCoMoving: first-order step in co-moving variables. The momentum magnitude
///    gamma|v| advances by d f_par / m and the direction turns by
///    d f_perp / (m gamma |v|). Keeps |v| < c for any step size and leaves the
///    speed untouched under purely perpendicular force.
///  kEuler: v <- v + d * acceleration_from_force(v, f), taken literally.
enum class VelocityUpdate { kCoMoving, kEuler };

/// Integrator used for ForM models: the trapezoidal sampler (sample_form) or
/// classical RK4 (ode_solve).
enum class FormIntegrator { kTrapezoid, kRk4 };

std::string to_string(FormIntegrator i);
FormIntegrator form_integrator_from_string(const std::string& name);

struct SamplerConfig {
  std::size_t M = 100;
  InitVelocityRule init_velocity = InitVelocityRule::kDatasetMatched;
  VecD explicit_velocity;            // used with kExplicit
  std::optional<double> horizon;     // defaults to the model's training duration
  std::uint64_t seed = 0;            // source draws (see draw_sources)
  VelocityUpdate velocity_update = VelocityUpdate::kCoMoving;
  bool lab_frame_fallback = false;   // apply (f_par, f_perp) along (e_x, e_y) at v = 0
  FormIntegrator form_integrator = FormIntegrator::kTrapezoid;

  void validate() const;
};

/// Iterates of one sampler run; v is filled for second-order samplers only.
struct SamplePath {
  std::vector<double> t;
  std::vector<VecD> x;
  std::vector<VecD> v;

  const VecD& endpoint() const { return x.back(); }
  double max_speed() const;
};

// Samplers over arbitrary predictors. `horizon` is the lab time covered in M steps.
SamplePath sample_o1(const VelocityPredictor& u1, const VecD& x0, std::size_t M, double horizon);
SamplePath sample_o1o2(const VelocityPredictor& u1, const AccelerationPredictor& u2,
                       const VecD& x0, std::size_t M, double horizon);
SamplePath sample_form(const ForcePredictor& force, const VecD& x0, const VecD& v0,
                       std::size_t M, double horizon, const PhysicsConfig& physics,
                       VelocityUpdate update = VelocityUpdate::kCoMoving,
                       bool lab_frame_fallback = false);

/// RK4 on x' = v, v' = acceleration_from_force(v, F(t, x, v)) over M steps.
SamplePath ode_solve(const ForceField& field, const VecD& x0, const VecD& v0, std::size_t M,
                     double horizon, const PhysicsConfig& physics);

/// Starting velocity chosen by sc.init_velocity for source point x0.
VecD starting_velocity(const TrainedModel& model, const VecD& x0, const SamplerConfig& sc);

// Model-level entry points; each checks the model's method tag.
SamplePath sample_o1(const TrainedModel& model, const VecD& x0, const SamplerConfig& sc);
SamplePath sample_o1o2(const TrainedModel& model, const VecD& x0, const SamplerConfig& sc);
SamplePath sample_form(const TrainedModel& model, const VecD& x0, const SamplerConfig& sc);
SamplePath ode_solve(const TrainedModel& model, const VecD& x0, const SamplerConfig& sc);

/// Dispatches on model.method (and sc.form_integrator for ForM).
SamplePath sample(const TrainedModel& model, const VecD& x0, const SamplerConfig& sc);

}  // namespace form

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "form/datasets.hpp"
#include "form/dynamics.hpp"
#include "form/neural.hpp"

namespace form {

/// O1: first-order flow matching. O1O2: first plus second order. Form: force matching.
enum class Method { kO1, kO1O2, kForm };

std::string to_string(Method m);
/// Accepts "o1", "o1o2" and "form" (case-insensitive).
Method method_from_string(const std::string& name);
/// Table label: "O1", "O1+O2", "ForM".
std::string display_name(Method m);

/// What the force head sees: lab time only, or position and time.
enum class FormInputMode { kTimeOnly, kTimeAndPosition };

std::string to_string(FormInputMode m);
FormInputMode form_input_mode_from_string(const std::string& name);

struct TrainConfig {
  Method method = Method::kForm;
  std::size_t steps = 20000;  // Adam steps
  std::size_t batch_size = 128;
  double lr = 1e-3;
  std::uint64_t seed = 0;
  FormInputMode form_input_mode = FormInputMode::kTimeOnly;
  std::vector<std::size_t> hidden = {64, 64};
  std::size_t loss_window = 100;  // loss_curve holds one mean per window
  /// O1O2 only: let the acceleration term's gradient reach u1 through u2's input.
  /// Off by default: u1's output is fed to u2 as a constant.
  bool o1o2_backprop_through_u1 = false;

  void validate() const;
};

/// A trained generator. Which heads are present depends on the method:
/// O1 -> u1; O1O2 -> u1, u2; ForM -> force.
struct TrainedModel {
  Method method = Method::kForm;
  std::optional<MlpParams> u1;     // (x, t) -> velocity
  std::optional<MlpParams> u2;     // (u1(x, t), x, t) -> acceleration
  std::optional<MlpParams> force;  // t or (x, t) -> (f_par, f_perp)
  FormInputMode form_input_mode = FormInputMode::kTimeOnly;
  double duration = 1.0;  // network time input is t / duration
  PhysicsConfig physics{};
  UnitSystem units{};
  DatasetSpec dataset{};  // source of the initial-velocity rule
  TrainConfig train_config{};
  std::vector<double> loss_curve;
  double final_loss = 0.0;

  /// Throws DataError unless exactly the heads required by `method` are present.
  void validate() const;
};

// Network evaluation helpers. `t` is lab time.
VecD eval_velocity(const TrainedModel& m, const VecD& x, double t);
VecD eval_acceleration(const TrainedModel& m, const VecD& u1_out, const VecD& x, double t);
ForceComponents eval_force(const TrainedModel& m, const VecD& x, double t);

// Predictors used by the objective definitions: the learned heads or any oracle.
using VelocityPredictor = std::function<VecD(const VecD& x, double t)>;
using AccelerationPredictor =
    std::function<VecD(const VecD& u1_out, const VecD& x, double t)>;
using ForcePredictor = std::function<ForceComponents(const VecD& x, double t)>;

/// Mean over every recorded grid point of |u1(x_t, t) - x_dot_t|^2.
double o1_objective(const std::vector<TrajectoryRecord>& data, const VelocityPredictor& u1);
/// Mean of |u1 - x_dot|^2 + |u2(u1, x, t) - x_ddot|^2.
double o1o2_objective(const std::vector<TrajectoryRecord>& data, const VelocityPredictor& u1,
                      const AccelerationPredictor& u2);
/// Mean of |F - (f_par, f_perp)|^2.
double form_objective(const std::vector<TrajectoryRecord>& data, const ForcePredictor& f);

/// Wraps the learned heads of `m` as predictors.
VelocityPredictor velocity_predictor(const TrainedModel& m);
AccelerationPredictor acceleration_predictor(const TrainedModel& m);
ForcePredictor force_predictor(const TrainedModel& m);

/// Training entry points. `data` must be nonempty with a shared grid shape.
TrainedModel train_o1(const std::vector<TrajectoryRecord>& data, const TrainConfig& cfg,
                      const DatasetSpec& dataset);
TrainedModel train_o1o2(const std::vector<TrajectoryRecord>& data, const TrainConfig& cfg,
                        const DatasetSpec& dataset);
TrainedModel train_form(const std::vector<TrajectoryRecord>& data, const TrainConfig& cfg,
                        const DatasetSpec& dataset);

/// Dispatches on cfg.method.
TrainedModel train(const std::vector<TrajectoryRecord>& data, const TrainConfig& cfg,
                   const DatasetSpec& dataset);

}  // namespace form

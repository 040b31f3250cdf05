#include "form/training.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <random>
#include <sstream>
#include <string>

#include "form/errors.hpp"
#include "form/parallel.hpp"

namespace form {
namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return s;
}

std::vector<std::size_t> head_dims(std::size_t in, const std::vector<std::size_t>& hidden,
                                   std::size_t out) {
  std::vector<std::size_t> dims{in};
  dims.insert(dims.end(), hidden.begin(), hidden.end());
  dims.push_back(out);
  return dims;
}

void check_data(const std::vector<TrajectoryRecord>& data) {
  if (data.empty()) throw DataError("training data is empty");
  const std::size_t n = data.front().steps.size();
  if (n < 3) throw DataError("training trajectories need at least 2 steps");
  for (const auto& r : data) {
    if (r.steps.size() != n) throw DataError("training trajectories do not share a grid");
  }
}

// Uniform (trajectory, grid index) draws; the grid stands in for t ~ U(0, T).
struct Batch {
  Eigen::MatrixXd x, tau, x_dot, x_ddot, comps;
};

Batch draw_batch(const std::vector<TrajectoryRecord>& data, std::size_t size, double duration,
                 std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick_traj(0, data.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_step(0, data.front().steps.size() - 1);
  const auto b = static_cast<Eigen::Index>(size);
  Batch out{Eigen::MatrixXd(2, b), Eigen::MatrixXd(1, b), Eigen::MatrixXd(2, b),
            Eigen::MatrixXd(2, b), Eigen::MatrixXd(2, b)};
  for (Eigen::Index j = 0; j < b; ++j) {
    const auto& traj = data[pick_traj(rng)];
    const auto& s = traj.steps[pick_step(rng)];
    out.x.col(j) = s.x;
    out.tau(0, j) = s.t / duration;
    out.x_dot.col(j) = s.v;
    out.x_ddot.col(j) = s.a;
    out.comps(0, j) = s.f_par;
    out.comps(1, j) = s.f_perp;
  }
  return out;
}

Eigen::MatrixXd stack(const Eigen::MatrixXd& top, const Eigen::MatrixXd& bottom) {
  Eigen::MatrixXd out(top.rows() + bottom.rows(), top.cols());
  out << top, bottom;
  return out;
}

// Mean squared residual norm over the batch and its gradient 2 r / B.
double squared_loss(const Eigen::MatrixXd& pred, const Eigen::MatrixXd& target,
                    Eigen::MatrixXd& grad) {
  const Eigen::MatrixXd r = pred - target;
  const double b = static_cast<double>(pred.cols());
  grad = (2.0 / b) * r;
  return r.squaredNorm() / b;
}

class LossTracker {
 public:
  LossTracker(std::size_t window, Method method) : window_(window), method_(method) {}

  void add(double loss, std::size_t step) {
    if (!std::isfinite(loss)) {
      std::ostringstream msg;
      msg << display_name(method_) << " training: non-finite loss at step " << step;
      if (!curve_.empty()) msg << " (last window mean " << curve_.back() << ")";
      throw NonFiniteError(msg.str());
    }
    sum_ += loss;
    if (++count_ == window_) flush();
  }

  void finish(TrainedModel& m) {
    if (count_ > 0) flush();
    m.loss_curve = curve_;
    m.final_loss = curve_.empty() ? 0.0 : curve_.back();
  }

 private:
  void flush() {
    curve_.push_back(sum_ / static_cast<double>(count_));
    sum_ = 0.0;
    count_ = 0;
  }

  std::size_t window_;
  Method method_;
  std::vector<double> curve_;
  double sum_ = 0.0;
  std::size_t count_ = 0;
};

TrainedModel make_model(const std::vector<TrajectoryRecord>& data, const TrainConfig& cfg,
                        const DatasetSpec& dataset, Method method) {
  cfg.validate();
  check_data(data);
  if (cfg.method != method) throw DataError("train config method does not match trainer");
  TrainedModel m;
  m.method = method;
  m.form_input_mode = cfg.form_input_mode;
  m.duration = data.front().duration();
  m.physics = dataset.physics;
  m.units = dataset.units;
  m.dataset = dataset;
  m.train_config = cfg;
  return m;
}

Eigen::MatrixXd force_inputs(FormInputMode mode, const Eigen::MatrixXd& x,
                             const Eigen::MatrixXd& tau) {
  return mode == FormInputMode::kTimeOnly ? tau : stack(x, tau);
}

VecD time_input(double t, double duration) { return VecD::Constant(1, t / duration); }

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::kO1: return "o1";
    case Method::kO1O2: return "o1o2";
    case Method::kForm: return "form";
  }
  return "unknown";
}

Method method_from_string(const std::string& name) {
  const std::string n = lower(name);
  if (n == "o1") return Method::kO1;
  if (n == "o1o2" || n == "o1+o2") return Method::kO1O2;
  if (n == "form") return Method::kForm;
  throw DataError("unknown method '" + name + "'");
}

std::string display_name(Method m) {
  switch (m) {
    case Method::kO1: return "O1";
    case Method::kO1O2: return "O1+O2";
    case Method::kForm: return "ForM";
  }
  return "?";
}

std::string to_string(FormInputMode m) {
  return m == FormInputMode::kTimeOnly ? "time-only" : "time-and-position";
}

FormInputMode form_input_mode_from_string(const std::string& name) {
  if (name == "time-only") return FormInputMode::kTimeOnly;
  if (name == "time-and-position") return FormInputMode::kTimeAndPosition;
  throw DataError("unknown force input mode '" + name + "'");
}

void TrainConfig::validate() const {
  if (steps == 0) throw DataError("train config: steps must be > 0");
  if (batch_size == 0) throw DataError("train config: batch_size must be > 0");
  if (!(lr > 0.0) || !std::isfinite(lr)) throw DataError("train config: lr must be positive");
  if (loss_window == 0) throw DataError("train config: loss_window must be > 0");
  for (auto h : hidden) {
    if (h == 0) throw DataError("train config: zero-width hidden layer");
  }
}

void TrainedModel::validate() const {
  const bool want_u1 = method != Method::kForm;
  const bool want_u2 = method == Method::kO1O2;
  const bool want_force = method == Method::kForm;
  if (u1.has_value() != want_u1 || u2.has_value() != want_u2 ||
      force.has_value() != want_force) {
    throw DataError("model heads do not match method " + to_string(method));
  }
  if (u1) {
    u1->validate();
    if (u1->input_dim() != 3 || u1->output_dim() != 2) throw ShapeError("u1 must map 3 -> 2");
  }
  if (u2) {
    u2->validate();
    if (u2->input_dim() != 5 || u2->output_dim() != 2) throw ShapeError("u2 must map 5 -> 2");
  }
  if (force) {
    force->validate();
    const std::size_t in = form_input_mode == FormInputMode::kTimeOnly ? 1 : 3;
    if (force->input_dim() != in || force->output_dim() != 2) {
      throw ShapeError("force head has the wrong shape for its input mode");
    }
  }
  if (!(duration > 0.0)) throw DataError("model duration must be positive");
  physics.validate();
}

VecD eval_velocity(const TrainedModel& m, const VecD& x, double t) {
  VecD in(3);
  in << x, t / m.duration;
  return mlp_forward(*m.u1, in);
}

VecD eval_acceleration(const TrainedModel& m, const VecD& u1_out, const VecD& x, double t) {
  VecD in(5);
  in << u1_out, x, t / m.duration;
  return mlp_forward(*m.u2, in);
}

ForceComponents eval_force(const TrainedModel& m, const VecD& x, double t) {
  VecD in;
  if (m.form_input_mode == FormInputMode::kTimeOnly) {
    in = time_input(t, m.duration);
  } else {
    in.resize(3);
    in << x, t / m.duration;
  }
  const VecD out = mlp_forward(*m.force, in);
  return {out[0], out[1]};
}

VelocityPredictor velocity_predictor(const TrainedModel& m) {
  return [&m](const VecD& x, double t) { return eval_velocity(m, x, t); };
}

AccelerationPredictor acceleration_predictor(const TrainedModel& m) {
  return [&m](const VecD& u, const VecD& x, double t) { return eval_acceleration(m, u, x, t); };
}

ForcePredictor force_predictor(const TrainedModel& m) {
  return [&m](const VecD& x, double t) { return eval_force(m, x, t); };
}

double o1_objective(const std::vector<TrajectoryRecord>& data, const VelocityPredictor& u1) {
  check_data(data);
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& r : data) {
    for (const auto& s : r.steps) {
      sum += (u1(s.x, s.t) - s.v).squaredNorm();
      ++n;
    }
  }
  return sum / static_cast<double>(n);
}

double o1o2_objective(const std::vector<TrajectoryRecord>& data, const VelocityPredictor& u1,
                      const AccelerationPredictor& u2) {
  check_data(data);
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& r : data) {
    for (const auto& s : r.steps) {
      const VecD vel = u1(s.x, s.t);
      sum += (vel - s.v).squaredNorm() + (u2(vel, s.x, s.t) - s.a).squaredNorm();
      ++n;
    }
  }
  return sum / static_cast<double>(n);
}

double form_objective(const std::vector<TrajectoryRecord>& data, const ForcePredictor& f) {
  check_data(data);
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& r : data) {
    for (const auto& s : r.steps) {
      const ForceComponents fc = f(s.x, s.t);
      const double dp = fc.f_par - s.f_par;
      const double dq = fc.f_perp - s.f_perp;
      sum += dp * dp + dq * dq;
      ++n;
    }
  }
  return sum / static_cast<double>(n);
}

TrainedModel train_o1(const std::vector<TrajectoryRecord>& data, const TrainConfig& cfg,
                      const DatasetSpec& dataset) {
  TrainedModel m = make_model(data, cfg, dataset, Method::kO1);
  MlpParams u1 = mlp_init(head_dims(3, cfg.hidden, 2), mix_seed(cfg.seed, 1));
  AdamState opt = adam_init(u1, {.lr = cfg.lr});
  std::mt19937_64 rng(mix_seed(cfg.seed, 0));
  LossTracker tracker(cfg.loss_window, Method::kO1);
  MlpTape tape;
  MlpGradient grad = zeros_like(u1);
  Eigen::MatrixXd g_out;
  for (std::size_t step = 0; step < cfg.steps; ++step) {
    const Batch b = draw_batch(data, cfg.batch_size, m.duration, rng);
    const Eigen::MatrixXd pred = mlp_forward_batch(u1, stack(b.x, b.tau), &tape);
    const double loss = squared_loss(pred, b.x_dot, g_out);
    tracker.add(loss, step);
    grad = zeros_like(u1);
    mlp_backward_batch(u1, tape, g_out, grad);
    adam_step(u1, grad, opt);
  }
  m.u1 = std::move(u1);
  tracker.finish(m);
  return m;
}

TrainedModel train_o1o2(const std::vector<TrajectoryRecord>& data, const TrainConfig& cfg,
                        const DatasetSpec& dataset) {
  TrainedModel m = make_model(data, cfg, dataset, Method::kO1O2);
  MlpParams u1 = mlp_init(head_dims(3, cfg.hidden, 2), mix_seed(cfg.seed, 1));
  MlpParams u2 = mlp_init(head_dims(5, cfg.hidden, 2), mix_seed(cfg.seed, 2));
  AdamState opt1 = adam_init(u1, {.lr = cfg.lr});
  AdamState opt2 = adam_init(u2, {.lr = cfg.lr});
  std::mt19937_64 rng(mix_seed(cfg.seed, 0));
  LossTracker tracker(cfg.loss_window, Method::kO1O2);
  MlpTape tape1, tape2;
  Eigen::MatrixXd g1, g2;
  for (std::size_t step = 0; step < cfg.steps; ++step) {
    const Batch b = draw_batch(data, cfg.batch_size, m.duration, rng);
    const Eigen::MatrixXd vel = mlp_forward_batch(u1, stack(b.x, b.tau), &tape1);
    const Eigen::MatrixXd acc = mlp_forward_batch(u2, stack(stack(vel, b.x), b.tau), &tape2);
    const double loss = squared_loss(vel, b.x_dot, g1) + squared_loss(acc, b.x_ddot, g2);
    tracker.add(loss, step);
    MlpGradient grad2 = zeros_like(u2);
    const Eigen::MatrixXd g_in2 = mlp_backward_batch(u2, tape2, g2, grad2);
    if (cfg.o1o2_backprop_through_u1) g1 += g_in2.topRows(2);
    MlpGradient grad1 = zeros_like(u1);
    mlp_backward_batch(u1, tape1, g1, grad1);
    adam_step(u1, grad1, opt1);
    adam_step(u2, grad2, opt2);
  }
  m.u1 = std::move(u1);
  m.u2 = std::move(u2);
  tracker.finish(m);
  return m;
}

TrainedModel train_form(const std::vector<TrajectoryRecord>& data, const TrainConfig& cfg,
                        const DatasetSpec& dataset) {
  TrainedModel m = make_model(data, cfg, dataset, Method::kForm);
  const std::size_t in = cfg.form_input_mode == FormInputMode::kTimeOnly ? 1 : 3;
  MlpParams f = mlp_init(head_dims(in, cfg.hidden, 2), mix_seed(cfg.seed, 3));
  AdamState opt = adam_init(f, {.lr = cfg.lr});
  std::mt19937_64 rng(mix_seed(cfg.seed, 0));
  LossTracker tracker(cfg.loss_window, Method::kForm);
  MlpTape tape;
  Eigen::MatrixXd g_out;
  for (std::size_t step = 0; step < cfg.steps; ++step) {
    const Batch b = draw_batch(data, cfg.batch_size, m.duration, rng);
    const Eigen::MatrixXd pred =
        mlp_forward_batch(f, force_inputs(cfg.form_input_mode, b.x, b.tau), &tape);
    const double loss = squared_loss(pred, b.comps, g_out);
    tracker.add(loss, step);
    MlpGradient grad = zeros_like(f);
    mlp_backward_batch(f, tape, g_out, grad);
    adam_step(f, grad, opt);
  }
  m.force = std::move(f);
  tracker.finish(m);
  return m;
}

TrainedModel train(const std::vector<TrajectoryRecord>& data, const TrainConfig& cfg,
                   const DatasetSpec& dataset) {
  switch (cfg.method) {
    case Method::kO1: return train_o1(data, cfg, dataset);
    case Method::kO1O2: return train_o1o2(data, cfg, dataset);
    case Method::kForm: return train_form(data, cfg, dataset);
  }
  throw DataError("unknown method");
}

}  // namespace form

#include "form/neural.hpp"

#include <cmath>
#include <random>
#include <string>

#include "form/errors.hpp"

namespace form {
namespace {

void apply_activation(Activation a, Eigen::MatrixXd& z) {
  if (a == Activation::kTanh) z = z.array().tanh().matrix();
}

// Derivative expressed through the activation's output y.
Eigen::MatrixXd activation_slope(Activation a, const Eigen::MatrixXd& y) {
  if (a == Activation::kTanh) return (1.0 - y.array().square()).matrix();
  return Eigen::MatrixXd::Ones(y.rows(), y.cols());
}

void require_same_shape(const MlpParams& a, const MlpParams& b, const char* what) {
  if (a.layer_dims != b.layer_dims) throw ShapeError(std::string(what) + ": shape mismatch");
}

}  // namespace

std::string to_string(Activation a) { return a == Activation::kTanh ? "tanh" : "identity"; }

Activation activation_from_string(const std::string& name) {
  if (name == "tanh") return Activation::kTanh;
  if (name == "identity") return Activation::kIdentity;
  throw DataError("unknown activation '" + name + "'");
}

std::size_t MlpParams::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += static_cast<std::size_t>(l.weight.size() + l.bias.size());
  return n;
}

void MlpParams::validate() const {
  if (layer_dims.size() < 2) throw ShapeError("mlp: need at least input and output dims");
  if (layers.size() != layer_dims.size() - 1) throw ShapeError("mlp: layer count mismatch");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& l = layers[i];
    if (static_cast<std::size_t>(l.weight.cols()) != layer_dims[i] ||
        static_cast<std::size_t>(l.weight.rows()) != layer_dims[i + 1] ||
        static_cast<std::size_t>(l.bias.size()) != layer_dims[i + 1]) {
      throw ShapeError("mlp: layer " + std::to_string(i) + " does not match layer_dims");
    }
    if (!l.weight.allFinite() || !l.bias.allFinite()) {
      throw NonFiniteError("mlp: layer " + std::to_string(i) + " has non-finite entries");
    }
  }
}

bool MlpParams::operator==(const MlpParams& other) const {
  if (layer_dims != other.layer_dims || hidden != other.hidden ||
      layers.size() != other.layers.size()) {
    return false;
  }
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& a = layers[i];
    const auto& b = other.layers[i];
    if (a.weight.rows() != b.weight.rows() || a.weight.cols() != b.weight.cols() ||
        a.bias.size() != b.bias.size()) {
      return false;
    }
    if (a.weight != b.weight || a.bias != b.bias) return false;
  }
  return true;
}

MlpParams mlp_init(const std::vector<std::size_t>& layer_dims, std::uint64_t seed,
                   InitScheme scheme, Activation hidden) {
  if (layer_dims.size() < 2) throw ShapeError("mlp_init: need at least two layer dims");
  for (auto d : layer_dims) {
    if (d == 0) throw ShapeError("mlp_init: zero-width layer");
  }
  MlpParams p;
  p.layer_dims = layer_dims;
  p.hidden = hidden;
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i + 1 < layer_dims.size(); ++i) {
    const auto fan_in = static_cast<Eigen::Index>(layer_dims[i]);
    const auto fan_out = static_cast<Eigen::Index>(layer_dims[i + 1]);
    DenseLayer l{Eigen::MatrixXd::Zero(fan_out, fan_in), Eigen::VectorXd::Zero(fan_out)};
    if (scheme == InitScheme::kXavierUniform) {
      const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
      std::uniform_real_distribution<double> dist(-limit, limit);
      for (Eigen::Index r = 0; r < fan_out; ++r) {
        for (Eigen::Index c = 0; c < fan_in; ++c) l.weight(r, c) = dist(rng);
      }
    }
    p.layers.push_back(std::move(l));
  }
  return p;
}

MlpGradient zeros_like(const MlpParams& p) {
  MlpGradient g;
  g.layer_dims = p.layer_dims;
  g.hidden = p.hidden;
  for (const auto& l : p.layers) {
    g.layers.push_back({Eigen::MatrixXd::Zero(l.weight.rows(), l.weight.cols()),
                        Eigen::VectorXd::Zero(l.bias.size())});
  }
  return g;
}

Eigen::MatrixXd mlp_forward_batch(const MlpParams& p, const Eigen::MatrixXd& inputs,
                                  MlpTape* tape) {
  if (static_cast<std::size_t>(inputs.rows()) != p.input_dim()) {
    throw ShapeError("mlp_forward: input has " + std::to_string(inputs.rows()) +
                     " rows, network expects " + std::to_string(p.input_dim()));
  }
  if (tape != nullptr) {
    tape->activations.clear();
    tape->activations.push_back(inputs);
  }
  Eigen::MatrixXd h = inputs;
  for (std::size_t i = 0; i < p.layers.size(); ++i) {
    const auto& l = p.layers[i];
    Eigen::MatrixXd z = l.weight * h;
    z.colwise() += l.bias;
    if (i + 1 < p.layers.size()) apply_activation(p.hidden, z);
    h = std::move(z);
    if (tape != nullptr) tape->activations.push_back(h);
  }
  return h;
}

VecD mlp_forward(const MlpParams& p, const VecD& input) {
  return mlp_forward_batch(p, input);
}

Eigen::MatrixXd mlp_backward_batch(const MlpParams& p, const MlpTape& tape,
                                   const Eigen::MatrixXd& grad_outputs, MlpGradient& grad) {
  require_same_shape(p, grad, "mlp_backward");
  if (tape.activations.size() != p.layers.size() + 1) {
    throw ShapeError("mlp_backward: tape does not belong to this network");
  }
  if (static_cast<std::size_t>(grad_outputs.rows()) != p.output_dim() ||
      grad_outputs.cols() != tape.activations.front().cols()) {
    throw ShapeError("mlp_backward: grad_output shape mismatch");
  }
  // delta holds d(loss)/d(pre-activation) of the current layer.
  Eigen::MatrixXd delta = grad_outputs;
  for (std::size_t k = p.layers.size(); k-- > 0;) {
    const Eigen::MatrixXd& in = tape.activations[k];
    grad.layers[k].weight.noalias() += delta * in.transpose();
    grad.layers[k].bias += delta.rowwise().sum();
    Eigen::MatrixXd back = p.layers[k].weight.transpose() * delta;
    if (k > 0) back.array() *= activation_slope(p.hidden, in).array();
    delta = std::move(back);
  }
  return delta;
}

MlpGradient mlp_backward(const MlpParams& p, const VecD& input, const VecD& grad_output) {
  MlpTape tape;
  mlp_forward_batch(p, input, &tape);
  MlpGradient g = zeros_like(p);
  mlp_backward_batch(p, tape, grad_output, g);
  return g;
}

Eigen::VectorXd flatten(const MlpParams& p) {
  Eigen::VectorXd flat(static_cast<Eigen::Index>(p.parameter_count()));
  Eigen::Index k = 0;
  for (const auto& l : p.layers) {
    for (Eigen::Index r = 0; r < l.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < l.weight.cols(); ++c) flat[k++] = l.weight(r, c);
    }
    for (Eigen::Index r = 0; r < l.bias.size(); ++r) flat[k++] = l.bias[r];
  }
  return flat;
}

void unflatten(const Eigen::VectorXd& flat, MlpParams& p) {
  if (static_cast<std::size_t>(flat.size()) != p.parameter_count()) {
    throw ShapeError("unflatten: expected " + std::to_string(p.parameter_count()) +
                     " values, got " + std::to_string(flat.size()));
  }
  Eigen::Index k = 0;
  for (auto& l : p.layers) {
    for (Eigen::Index r = 0; r < l.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < l.weight.cols(); ++c) l.weight(r, c) = flat[k++];
    }
    for (Eigen::Index r = 0; r < l.bias.size(); ++r) l.bias[r] = flat[k++];
  }
}

AdamState adam_init(const MlpParams& p, const AdamConfig& cfg) {
  return {zeros_like(p), zeros_like(p), 0, cfg};
}

void adam_step(MlpParams& p, const MlpGradient& g, AdamState& s) {
  require_same_shape(p, g, "adam_step");
  require_same_shape(p, s.first_moment, "adam_step");
  ++s.step;
  const auto& c = s.config;
  const double step = static_cast<double>(s.step);
  const double corr1 = 1.0 - std::pow(c.beta1, step);
  const double corr2 = 1.0 - std::pow(c.beta2, step);
  auto update = [&](auto& param, const auto& grad, auto& m, auto& v) {
    m = c.beta1 * m + (1.0 - c.beta1) * grad;
    v = c.beta2 * v + (1.0 - c.beta2) * grad.cwiseProduct(grad);
    param.array() -= c.lr * (m.array() / corr1) / ((v.array() / corr2).sqrt() + c.eps);
  };
  for (std::size_t i = 0; i < p.layers.size(); ++i) {
    update(p.layers[i].weight, g.layers[i].weight, s.first_moment.layers[i].weight,
           s.second_moment.layers[i].weight);
    update(p.layers[i].bias, g.layers[i].bias, s.first_moment.layers[i].bias,
           s.second_moment.layers[i].bias);
  }
}

}  // namespace form

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "form/relativity.hpp"

namespace form {

enum class Activation { kTanh, kIdentity };

std::string to_string(Activation a);
Activation activation_from_string(const std::string& name);

struct DenseLayer {
  Eigen::MatrixXd weight;  // out x in
  Eigen::VectorXd bias;    // out
};

/// Fully connected network: `hidden` activation after every layer but the last,
/// identity on the last.
struct MlpParams {
  std::vector<std::size_t> layer_dims;
  Activation hidden = Activation::kTanh;
  std::vector<DenseLayer> layers;

  std::size_t input_dim() const { return layer_dims.front(); }
  std::size_t output_dim() const { return layer_dims.back(); }
  std::size_t parameter_count() const;

  /// Throws ShapeError if the layers do not chain or NonFiniteError on NaN/inf.
  void validate() const;
  /// Exact (bitwise-value) equality of shapes and entries.
  bool operator==(const MlpParams& other) const;
};

/// Gradient of a scalar with respect to every weight and bias; same layout as MlpParams.
using MlpGradient = MlpParams;

enum class InitScheme {
  kXavierUniform,  // U(-l, l), l = sqrt(6 / (fan_in + fan_out))
  kZero,
};

MlpParams mlp_init(const std::vector<std::size_t>& layer_dims, std::uint64_t seed,
                   InitScheme scheme = InitScheme::kXavierUniform,
                   Activation hidden = Activation::kTanh);

/// Same shape as `p`, every entry zero.
MlpGradient zeros_like(const MlpParams& p);

VecD mlp_forward(const MlpParams& p, const VecD& input);

/// Intermediate activations kept for the backward pass. Column j is sample j.
struct MlpTape {
  std::vector<Eigen::MatrixXd> activations;  // activations[0] is the input batch
};

Eigen::MatrixXd mlp_forward_batch(const MlpParams& p, const Eigen::MatrixXd& inputs,
                                  MlpTape* tape = nullptr);

/// Reverse pass for a batch: accumulates d(sum_j <out_j, grad_out_j>)/d(params) into
/// `grad` (which must have p's shape) and returns the gradient with respect to the inputs.
Eigen::MatrixXd mlp_backward_batch(const MlpParams& p, const MlpTape& tape,
                                   const Eigen::MatrixXd& grad_outputs, MlpGradient& grad);

/// Gradient of <mlp_forward(p, input), grad_output> with respect to the parameters.
MlpGradient mlp_backward(const MlpParams& p, const VecD& input, const VecD& grad_output);

/// All parameters in layer order: weight (row-major) then bias.
Eigen::VectorXd flatten(const MlpParams& p);
void unflatten(const Eigen::VectorXd& flat, MlpParams& p);

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  MlpParams first_moment;
  MlpParams second_moment;
  std::uint64_t step = 0;
  AdamConfig config;
};

AdamState adam_init(const MlpParams& p, const AdamConfig& cfg = {});

/// One bias-corrected Adam update of `p` in place.
void adam_step(MlpParams& p, const MlpGradient& g, AdamState& s);

}  // namespace form

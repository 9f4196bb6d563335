// Fully-connected network with ReLU hidden activations and a linear output
// layer, plus exact reverse-mode gradients for that chain. The ReLU
// subgradient at 0 is fixed to 0 so gradients are deterministic.

#pragma once

#include <cstdint>
#include <vector>

#include "choice/numerics/rng.hpp"
#include "choice/numerics/tensor.hpp"

namespace choice::num {

enum class Activation {
  kRelu,      // ReLU on hidden layers, identity on the last layer
  kIdentity,  // identity everywhere (pure affine chain)
};

struct MlpParams {
  std::vector<int> layer_dims;   // [in, h1, ..., out]
  std::vector<Tensor> weights;   // per layer, shape [out, in]
  std::vector<Tensor> biases;    // per layer, shape [out]
  Activation activation = Activation::kRelu;

  int input_dim() const { return layer_dims.front(); }
  int output_dim() const { return layer_dims.back(); }
  int layer_count() const { return static_cast<int>(weights.size()); }
  std::size_t parameter_count() const;
};

// Weights uniform in +/- sqrt(1/fan_in), biases zero.
MlpParams make_mlp(std::vector<int> layer_dims, Rng& rng,
                   Activation activation = Activation::kRelu);

// All weights and biases zero; with kRelu this network is inert (dead hidden
// units receive no gradient), which some callers rely on.
MlpParams make_zero_mlp(std::vector<int> layer_dims,
                        Activation activation = Activation::kRelu);

// Per-layer activations recorded by the forward pass, consumed by backward.
struct MlpTrace {
  std::vector<Tensor> inputs;   // inputs[l] = activation entering layer l
  std::vector<Tensor> preacts;  // preacts[l] = W_l x + b_l before activation
};

struct MlpGrads {
  std::vector<Tensor> weights;
  std::vector<Tensor> biases;

  void add_scaled(const MlpGrads& other, double scale);
  void scale(double s);
};

MlpGrads make_zero_grads(const MlpParams& params);

struct MlpBackwardResult {
  MlpGrads grads;
  Tensor input_grad;
};

// input must be rank-1 with length layer_dims.front(). Output is rank-1.
Tensor mlp_forward(const MlpParams& params, const Tensor& input,
                   MlpTrace* trace = nullptr);

// Gradients of sum(output * output_grad) w.r.t. every parameter and the
// input, exact for the piecewise-linear network.
MlpBackwardResult mlp_backward(const MlpParams& params, const Tensor& input,
                               const Tensor& output_grad);

// Variant reusing a recorded forward trace (avoids the re-forward).
MlpBackwardResult mlp_backward(const MlpParams& params, const MlpTrace& trace,
                               const Tensor& output_grad);

}  // namespace choice::num

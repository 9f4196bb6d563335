#include "choice/numerics/adam.hpp"

#include <cmath>
#include <string>

namespace choice::num {

AdamState make_adam(const MlpParams& params, AdamConfig config) {
  AdamState s;
  s.config = config;
  s.m = make_zero_grads(params);
  s.v = make_zero_grads(params);
  return s;
}

namespace {

void update_tensor(const AdamConfig& c, long step, Tensor& param, Tensor& m,
                   Tensor& v, const Tensor& g, const std::string& name) {
  if (!g.all_finite()) {
    throw NumericalError("non-finite gradient for " + name + " " + g.shape_str());
  }
  double bc1 = 1.0 - std::pow(c.beta1, static_cast<double>(step));
  double bc2 = 1.0 - std::pow(c.beta2, static_cast<double>(step));
  for (std::size_t i = 0; i < param.size(); ++i) {
    m[i] = c.beta1 * m[i] + (1.0 - c.beta1) * g[i];
    v[i] = c.beta2 * v[i] + (1.0 - c.beta2) * g[i] * g[i];
    double mhat = m[i] / bc1;
    double vhat = v[i] / bc2;
    param[i] -= c.lr * mhat / (std::sqrt(vhat) + c.eps);
  }
}

}  // namespace

void adam_step(AdamState& state, MlpParams& params, const MlpGrads& grads) {
  if (grads.weights.size() != params.weights.size()) {
    throw std::invalid_argument("adam_step: gradient/parameter layer count mismatch");
  }
  ++state.step;
  for (std::size_t l = 0; l < params.weights.size(); ++l) {
    if (!grads.weights[l].same_shape(params.weights[l]) ||
        !grads.biases[l].same_shape(params.biases[l])) {
      throw std::invalid_argument("adam_step: gradient shape mismatch at layer " +
                                  std::to_string(l));
    }
    std::string tag = "layer " + std::to_string(l);
    update_tensor(state.config, state.step, params.weights[l], state.m.weights[l],
                  state.v.weights[l], grads.weights[l], tag + " weights");
    update_tensor(state.config, state.step, params.biases[l], state.m.biases[l],
                  state.v.biases[l], grads.biases[l], tag + " biases");
  }
}

}  // namespace choice::num

#include "choice/numerics/mlp.hpp"

#include <cmath>
#include <stdexcept>

namespace choice::num {

std::size_t MlpParams::parameter_count() const {
  std::size_t n = 0;
  for (int l = 0; l < layer_count(); ++l) {
    n += weights[l].size() + biases[l].size();
  }
  return n;
}

namespace {

void validate_dims(const std::vector<int>& layer_dims) {
  if (layer_dims.size() < 2) {
    throw std::invalid_argument("mlp needs at least [in, out] layer dims");
  }
  for (int d : layer_dims) {
    if (d <= 0) throw std::invalid_argument("mlp layer dims must be positive");
  }
}

}  // namespace

MlpParams make_mlp(std::vector<int> layer_dims, Rng& rng, Activation activation) {
  validate_dims(layer_dims);
  MlpParams p;
  p.layer_dims = std::move(layer_dims);
  p.activation = activation;
  for (std::size_t l = 1; l < p.layer_dims.size(); ++l) {
    int in = p.layer_dims[l - 1];
    int out = p.layer_dims[l];
    Tensor w({out, in});
    double bound = std::sqrt(1.0 / in);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = rng.uniform(-bound, bound);
    p.weights.push_back(std::move(w));
    p.biases.emplace_back(std::vector<int>{out});
  }
  return p;
}

MlpParams make_zero_mlp(std::vector<int> layer_dims, Activation activation) {
  validate_dims(layer_dims);
  MlpParams p;
  p.layer_dims = std::move(layer_dims);
  p.activation = activation;
  for (std::size_t l = 1; l < p.layer_dims.size(); ++l) {
    p.weights.emplace_back(std::vector<int>{p.layer_dims[l], p.layer_dims[l - 1]});
    p.biases.emplace_back(std::vector<int>{p.layer_dims[l]});
  }
  return p;
}

void MlpGrads::add_scaled(const MlpGrads& other, double scale) {
  for (std::size_t l = 0; l < weights.size(); ++l) {
    for (std::size_t i = 0; i < weights[l].size(); ++i) {
      weights[l][i] += scale * other.weights[l][i];
    }
    for (std::size_t i = 0; i < biases[l].size(); ++i) {
      biases[l][i] += scale * other.biases[l][i];
    }
  }
}

void MlpGrads::scale(double s) {
  for (std::size_t l = 0; l < weights.size(); ++l) {
    for (double& v : weights[l].data()) v *= s;
    for (double& v : biases[l].data()) v *= s;
  }
}

MlpGrads make_zero_grads(const MlpParams& params) {
  MlpGrads g;
  for (int l = 0; l < params.layer_count(); ++l) {
    g.weights.emplace_back(params.weights[l].shape());
    g.biases.emplace_back(params.biases[l].shape());
  }
  return g;
}

Tensor mlp_forward(const MlpParams& params, const Tensor& input, MlpTrace* trace) {
  if (input.rank() != 1 || input.dim(0) != params.input_dim()) {
    throw std::invalid_argument("mlp_forward: input shape " + input.shape_str() +
                                " does not match input dim " +
                                std::to_string(params.input_dim()));
  }
  if (trace) {
    trace->inputs.clear();
    trace->preacts.clear();
  }
  Tensor x = input;
  int last = params.layer_count() - 1;
  for (int l = 0; l <= last; ++l) {
    const Tensor& w = params.weights[l];
    const Tensor& b = params.biases[l];
    if (trace) trace->inputs.push_back(x);
    Tensor y(std::vector<int>{w.rows()});
    for (int r = 0; r < w.rows(); ++r) {
      double acc = b[static_cast<std::size_t>(r)];
      for (int c = 0; c < w.cols(); ++c) {
        acc += w.at(r, c) * x[static_cast<std::size_t>(c)];
      }
      y[static_cast<std::size_t>(r)] = acc;
    }
    if (trace) trace->preacts.push_back(y);
    if (params.activation == Activation::kRelu && l != last) {
      for (double& v : y.data()) v = v > 0.0 ? v : 0.0;
    }
    x = std::move(y);
  }
  x.require_finite("mlp_forward output");
  return x;
}

MlpBackwardResult mlp_backward(const MlpParams& params, const Tensor& input,
                               const Tensor& output_grad) {
  MlpTrace trace;
  mlp_forward(params, input, &trace);
  return mlp_backward(params, trace, output_grad);
}

MlpBackwardResult mlp_backward(const MlpParams& params, const MlpTrace& trace,
                               const Tensor& output_grad) {
  int last = params.layer_count() - 1;
  if (output_grad.rank() != 1 || output_grad.dim(0) != params.output_dim()) {
    throw std::invalid_argument("mlp_backward: output_grad shape " +
                                output_grad.shape_str() + " does not match output dim " +
                                std::to_string(params.output_dim()));
  }
  MlpBackwardResult res;
  res.grads = make_zero_grads(params);

  Tensor g = output_grad;  // gradient w.r.t. layer output (post-activation)
  for (int l = last; l >= 0; --l) {
    const Tensor& w = params.weights[l];
    const Tensor& x = trace.inputs[static_cast<std::size_t>(l)];
    // Through the activation: last layer is linear; hidden layers gate by
    // relu'(preact), which is 0 at preact <= 0.
    if (params.activation == Activation::kRelu && l != last) {
      const Tensor& z = trace.preacts[static_cast<std::size_t>(l)];
      for (std::size_t i = 0; i < g.size(); ++i) {
        if (z[i] <= 0.0) g[i] = 0.0;
      }
    }
    Tensor& dw = res.grads.weights[static_cast<std::size_t>(l)];
    Tensor& db = res.grads.biases[static_cast<std::size_t>(l)];
    for (int r = 0; r < w.rows(); ++r) {
      double gr = g[static_cast<std::size_t>(r)];
      db[static_cast<std::size_t>(r)] += gr;
      for (int c = 0; c < w.cols(); ++c) {
        dw.at(r, c) += gr * x[static_cast<std::size_t>(c)];
      }
    }
    Tensor gx(std::vector<int>{w.cols()});
    for (int c = 0; c < w.cols(); ++c) {
      double acc = 0.0;
      for (int r = 0; r < w.rows(); ++r) {
        acc += w.at(r, c) * g[static_cast<std::size_t>(r)];
      }
      gx[static_cast<std::size_t>(c)] = acc;
    }
    g = std::move(gx);
  }
  res.input_grad = std::move(g);
  return res;
}

}  // namespace choice::num

#include "choice/baselines/denoiser.hpp"

#include <cmath>
#include <functional>

#include "choice/policy/choice_policy.hpp"

namespace choice::baselines {

using num::Tensor;
using policy::ActionChunk;
using policy::Observation;

namespace {
constexpr double kTwoPi = 6.283185307179586;
}

DenoiserModel make_denoiser(const DenoiserConfig& config, num::Rng rng) {
  if (config.steps < 1) throw std::invalid_argument("denoiser: steps must be >= 1");
  if (!(config.beta_min > 0.0 && config.beta_max < 1.0 && config.beta_min <= config.beta_max)) {
    throw std::invalid_argument("denoiser: schedule must be increasing within (0,1)");
  }
  DenoiserModel m;
  m.config = config;
  m.stats = policy::NormalizationStats::identity(config.obs_dim, config.action_dim);
  num::Rng enc_rng = rng.split(0);
  num::Rng net_rng = rng.split(1);
  m.encoder = num::make_mlp(
      {config.obs_dim, config.encoder_hidden, config.encoder_hidden, config.feature_dim},
      enc_rng);
  int in_dim = config.feature_dim + config.chunk_size() + kStepEmbedDim;
  m.noise_net = num::make_mlp({in_dim, config.noise_hidden, config.chunk_size()}, net_rng);

  m.betas.resize(static_cast<std::size_t>(config.steps));
  for (int i = 0; i < config.steps; ++i) {
    m.betas[static_cast<std::size_t>(i)] =
        config.steps == 1
            ? config.beta_max
            : config.beta_min + (config.beta_max - config.beta_min) * i / (config.steps - 1);
  }
  m.alpha_bars.resize(m.betas.size());
  double prod = 1.0;
  for (std::size_t i = 0; i < m.betas.size(); ++i) {
    prod *= 1.0 - m.betas[i];
    m.alpha_bars[i] = prod;
  }
  return m;
}

namespace {

// s is 1-based.
void write_step_embed(const DenoiserModel& m, int s, double* out) {
  double frac = static_cast<double>(s) / m.config.steps;
  out[0] = frac;
  out[1] = std::sin(kTwoPi * frac);
  out[2] = std::cos(kTwoPi * frac);
  out[3] = std::sqrt(m.alpha_bars[static_cast<std::size_t>(s - 1)]);
}

Tensor noise_net_input(const DenoiserModel& m, const Tensor& feature,
                       std::span<const double> chunk, int s) {
  const DenoiserConfig& c = m.config;
  Tensor in(std::vector<int>{c.feature_dim + c.chunk_size() + kStepEmbedDim});
  for (int i = 0; i < c.feature_dim; ++i) in[static_cast<std::size_t>(i)] = feature[static_cast<std::size_t>(i)];
  for (int i = 0; i < c.chunk_size(); ++i) {
    in[static_cast<std::size_t>(c.feature_dim + i)] = chunk[static_cast<std::size_t>(i)];
  }
  write_step_embed(m, s, &in.data()[static_cast<std::size_t>(c.feature_dim + c.chunk_size())]);
  return in;
}

Tensor encode(const DenoiserModel& m, const std::vector<double>& nobs,
              num::MlpTrace* tr = nullptr) {
  if (static_cast<int>(nobs.size()) != m.config.obs_dim) {
    throw std::invalid_argument("denoiser: observation dim mismatch");
  }
  return num::mlp_forward(m.encoder, Tensor({m.config.obs_dim}, nobs), tr);
}

// Reverse pass shared by sampling and the deterministic variant. noise_fn
// supplies the per-entry injected noise for steps s > 1.
ActionChunk reverse_pass(const DenoiserModel& m, const Observation& obs,
                         std::vector<double> x,
                         const std::function<double()>& noise_fn) {
  const DenoiserConfig& c = m.config;
  std::vector<double> nobs = m.stats.normalize_obs(obs);
  Tensor feature = encode(m, nobs);
  for (int s = c.steps; s >= 1; --s) {
    double beta = m.betas[static_cast<std::size_t>(s - 1)];
    double alpha = 1.0 - beta;
    double abar = m.alpha_bars[static_cast<std::size_t>(s - 1)];
    Tensor eps = num::mlp_forward(m.noise_net, noise_net_input(m, feature, x, s));
    double coef = beta / std::sqrt(1.0 - abar);
    double inv_sqrt_alpha = 1.0 / std::sqrt(alpha);
    for (int i = 0; i < c.chunk_size(); ++i) {
      x[static_cast<std::size_t>(i)] =
          inv_sqrt_alpha * (x[static_cast<std::size_t>(i)] - coef * eps[static_cast<std::size_t>(i)]);
    }
    if (s > 1) {
      double abar_prev = m.alpha_bars[static_cast<std::size_t>(s - 2)];
      double sigma = std::sqrt((1.0 - abar_prev) / (1.0 - abar) * beta);
      for (int i = 0; i < c.chunk_size(); ++i) {
        x[static_cast<std::size_t>(i)] += sigma * noise_fn();
      }
    }
    for (double v : x) {
      if (!std::isfinite(v)) throw num::NumericalError("non-finite denoiser sample");
    }
  }
  ActionChunk chunk(c.horizon, c.action_dim);
  chunk.values = std::move(x);
  return m.stats.denormalize_chunk(chunk);
}

}  // namespace

ActionChunk denoiser_sample(const DenoiserModel& model, const Observation& obs,
                            num::Rng& rng) {
  std::vector<double> x(static_cast<std::size_t>(model.config.chunk_size()));
  for (double& v : x) v = rng.normal();
  return reverse_pass(model, obs, std::move(x), [&rng]() { return rng.normal(); });
}

ActionChunk denoiser_denoise(const DenoiserModel& model, const Observation& obs,
                             const ActionChunk& initial) {
  if (initial.horizon != model.config.horizon ||
      initial.action_dim != model.config.action_dim) {
    throw std::invalid_argument("denoiser_denoise: initial chunk shape mismatch");
  }
  return reverse_pass(model, obs, initial.values, []() { return 0.0; });
}

std::vector<double> denoiser_fit(DenoiserModel& model, const policy::ChunkedDataset& data,
                                 const DenoiserFitConfig& config) {
  if (data.samples.empty()) throw std::invalid_argument("denoiser_fit: empty dataset");
  const DenoiserConfig& c = model.config;
  if (data.obs_dim != c.obs_dim || data.horizon != c.horizon ||
      data.action_dim != c.action_dim) {
    throw std::invalid_argument("denoiser_fit: dataset dims do not match model config");
  }
  model.stats = config.normalize
                    ? policy::compute_stats(data)
                    : policy::NormalizationStats::identity(data.obs_dim, data.action_dim);
  std::vector<policy::ChunkedSample> train;
  train.reserve(data.samples.size());
  for (const policy::ChunkedSample& s : data.samples) {
    train.push_back(policy::ChunkedSample{model.stats.normalize_obs(s.obs),
                                          model.stats.normalize_chunk(s.target)});
  }

  num::AdamState enc_opt = num::make_adam(model.encoder, config.adam);
  num::AdamState net_opt = num::make_adam(model.noise_net, config.adam);
  num::Rng noise_rng = num::Rng(config.seed).split(0x6e6f6973);

  std::vector<double> epoch_loss;
  int cur_epoch = -1;
  double ep_loss = 0.0;
  std::size_t ep_count = 0;
  auto flush_epoch = [&]() {
    if (cur_epoch >= 0 && ep_count > 0) {
      epoch_loss.push_back(ep_loss / static_cast<double>(ep_count));
    }
    ep_loss = 0.0;
    ep_count = 0;
  };

  int chunk_size = c.chunk_size();
  policy::for_each_batch(
      train.size(), config.batch_size, config.epochs, config.seed,
      [&](int epoch, std::span<const std::size_t> batch) {
        if (epoch != cur_epoch) {
          flush_epoch();
          cur_epoch = epoch;
        }
        num::MlpGrads enc_grads = num::make_zero_grads(model.encoder);
        num::MlpGrads net_grads = num::make_zero_grads(model.noise_net);
        double scale = 1.0 / static_cast<double>(batch.size());
        for (std::size_t idx : batch) {
          const policy::ChunkedSample& smp = train[idx];
          int s = 1 + noise_rng.uniform_int(c.steps);
          double abar = model.alpha_bars[static_cast<std::size_t>(s - 1)];
          double sa = std::sqrt(abar);
          double sb = std::sqrt(1.0 - abar);
          std::vector<double> noise(static_cast<std::size_t>(chunk_size));
          std::vector<double> noisy(static_cast<std::size_t>(chunk_size));
          for (int i = 0; i < chunk_size; ++i) {
            noise[static_cast<std::size_t>(i)] = noise_rng.normal();
            noisy[static_cast<std::size_t>(i)] =
                sa * smp.target.values[static_cast<std::size_t>(i)] +
                sb * noise[static_cast<std::size_t>(i)];
          }
          num::MlpTrace enc_tr, net_tr;
          Tensor feature = encode(model, smp.obs, &enc_tr);
          Tensor in = noise_net_input(model, feature, noisy, s);
          Tensor pred = num::mlp_forward(model.noise_net, in, &net_tr);
          double loss = 0.0;
          Tensor dout(std::vector<int>{chunk_size});
          for (int i = 0; i < chunk_size; ++i) {
            double d = pred[static_cast<std::size_t>(i)] - noise[static_cast<std::size_t>(i)];
            loss += d * d;
            dout[static_cast<std::size_t>(i)] = 2.0 / chunk_size * d;
          }
          loss /= chunk_size;
          if (!std::isfinite(loss)) throw num::NumericalError("non-finite denoiser loss");
          num::MlpBackwardResult net_bwd = num::mlp_backward(model.noise_net, net_tr, dout);
          // Only the feature slice of the input gradient reaches the encoder;
          // the noisy chunk and the step embedding are data.
          Tensor dfeat(std::vector<int>{c.feature_dim});
          for (int i = 0; i < c.feature_dim; ++i) {
            dfeat[static_cast<std::size_t>(i)] = net_bwd.input_grad[static_cast<std::size_t>(i)];
          }
          num::MlpBackwardResult enc_bwd = num::mlp_backward(model.encoder, enc_tr, dfeat);
          enc_grads.add_scaled(enc_bwd.grads, scale);
          net_grads.add_scaled(net_bwd.grads, scale);
          ep_loss += loss;
          ++ep_count;
        }
        num::adam_step(enc_opt, model.encoder, enc_grads);
        num::adam_step(net_opt, model.noise_net, net_grads);
      });
  flush_epoch();
  return epoch_loss;
}

}  // namespace choice::baselines

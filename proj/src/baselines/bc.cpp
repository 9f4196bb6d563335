#include "choice/baselines/bc.hpp"

#include <cmath>

namespace choice::baselines {

using num::Tensor;
using policy::compute_stats;

BcModel make_bc_model(const ModelConfig& config, num::Rng rng) {
  BcModel m;
  m.config = config;
  m.stats = NormalizationStats::identity(config.obs_dim, config.action_dim);
  num::Rng enc_rng = rng.split(0);
  num::Rng head_rng = rng.split(1);
  m.encoder = num::make_mlp(
      {config.obs_dim, config.encoder_hidden, config.encoder_hidden, config.feature_dim},
      enc_rng);
  m.action_head =
      num::make_mlp({config.feature_dim, config.head_hidden, config.chunk_size()}, head_rng);
  return m;
}

namespace {

Tensor raw_forward(const BcModel& m, const Observation& obs, num::MlpTrace* enc_tr = nullptr,
                   num::MlpTrace* head_tr = nullptr) {
  if (static_cast<int>(obs.size()) != m.config.obs_dim) {
    throw std::invalid_argument("bc: observation dim mismatch");
  }
  Tensor feat = num::mlp_forward(m.encoder, Tensor({m.config.obs_dim}, obs), enc_tr);
  return num::mlp_forward(m.action_head, feat, head_tr);
}

ActionChunk to_chunk(const Tensor& flat, const ModelConfig& c) {
  ActionChunk chunk(c.horizon, c.action_dim);
  chunk.values = flat.data();
  return chunk;
}

}  // namespace

ActionChunk bc_infer(const BcModel& model, const Observation& obs) {
  std::vector<double> nobs = model.stats.normalize_obs(obs);
  ActionChunk chunk = to_chunk(raw_forward(model, nobs), model.config);
  return model.stats.denormalize_chunk(chunk);
}

double bc_loss(const BcModel& model, const Observation& obs, const ActionChunk& gt) {
  return policy::chunk_mse(to_chunk(raw_forward(model, obs), model.config), gt);
}

FitResult bc_fit(BcModel& model, const ChunkedDataset& data, const FitConfig& config) {
  if (data.samples.empty()) throw std::invalid_argument("bc_fit: empty dataset");
  if (data.obs_dim != model.config.obs_dim || data.horizon != model.config.horizon ||
      data.action_dim != model.config.action_dim) {
    throw std::invalid_argument("bc_fit: dataset dims do not match model config");
  }

  model.stats = config.normalize
                    ? compute_stats(data)
                    : NormalizationStats::identity(data.obs_dim, data.action_dim);
  std::vector<policy::ChunkedSample> train;
  train.reserve(data.samples.size());
  for (const policy::ChunkedSample& s : data.samples) {
    train.push_back(policy::ChunkedSample{model.stats.normalize_obs(s.obs),
                                          model.stats.normalize_chunk(s.target)});
  }

  num::AdamState enc_opt = num::make_adam(model.encoder, config.adam);
  num::AdamState head_opt = num::make_adam(model.action_head, config.adam);

  FitResult result;
  int cur_epoch = -1;
  double ep_loss = 0.0;
  std::size_t ep_count = 0;
  auto flush_epoch = [&]() {
    if (cur_epoch >= 0 && ep_count > 0) {
      double mean = ep_loss / static_cast<double>(ep_count);
      result.epoch_total.push_back(mean);
      result.epoch_action.push_back(mean);
      result.epoch_score.push_back(0.0);
    }
    ep_loss = 0.0;
    ep_count = 0;
  };

  int chunk_size = model.config.chunk_size();
  policy::for_each_batch(
      train.size(), config.batch_size, config.epochs, config.seed,
      [&](int epoch, std::span<const std::size_t> batch) {
        if (epoch != cur_epoch) {
          flush_epoch();
          cur_epoch = epoch;
        }
        num::MlpGrads enc_grads = num::make_zero_grads(model.encoder);
        num::MlpGrads head_grads = num::make_zero_grads(model.action_head);
        double scale = 1.0 / static_cast<double>(batch.size());
        double batch_loss = 0.0;
        for (std::size_t idx : batch) {
          num::MlpTrace enc_tr, head_tr;
          Tensor out = raw_forward(model, train[idx].obs, &enc_tr, &head_tr);
          const ActionChunk& gt = train[idx].target;
          double loss = 0.0;
          Tensor dout(std::vector<int>{chunk_size});
          for (int i = 0; i < chunk_size; ++i) {
            double d = out[static_cast<std::size_t>(i)] - gt.values[static_cast<std::size_t>(i)];
            loss += d * d;
            dout[static_cast<std::size_t>(i)] = 2.0 / chunk_size * d;
          }
          loss /= chunk_size;
          if (!std::isfinite(loss)) throw num::NumericalError("non-finite bc loss");
          num::MlpBackwardResult head_bwd = num::mlp_backward(model.action_head, head_tr, dout);
          num::MlpBackwardResult enc_bwd =
              num::mlp_backward(model.encoder, enc_tr, head_bwd.input_grad);
          enc_grads.add_scaled(enc_bwd.grads, scale);
          head_grads.add_scaled(head_bwd.grads, scale);
          ep_loss += loss;
          batch_loss += loss * scale;
          ++ep_count;
        }
        num::adam_step(enc_opt, model.encoder, enc_grads);
        num::adam_step(head_opt, model.action_head, head_grads);
        result.step_action.push_back(batch_loss);
      });
  flush_epoch();
  return result;
}

}  // namespace choice::baselines

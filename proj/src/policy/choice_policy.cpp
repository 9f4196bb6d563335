#include "choice/policy/choice_policy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace choice::policy {

using num::MlpTrace;
using num::Tensor;

ChoicePolicyModel make_choice_model(const ModelConfig& config, num::Rng rng) {
  if (config.k < 1) throw std::invalid_argument("model config: K must be >= 1");
  ChoicePolicyModel m;
  m.config = config;
  m.stats = NormalizationStats::identity(config.obs_dim, config.action_dim);
  num::Rng enc_rng = rng.split(0);
  num::Rng prop_rng = rng.split(1);
  num::Rng score_rng = rng.split(2);
  m.encoder = num::make_mlp(
      {config.obs_dim, config.encoder_hidden, config.encoder_hidden, config.feature_dim},
      enc_rng);
  m.proposal_head =
      num::make_mlp({config.feature_dim, config.head_hidden, config.proposal_out()}, prop_rng);
  m.score_head = num::make_mlp({config.feature_dim, config.head_hidden, config.k}, score_rng);
  return m;
}

EvalCounters& eval_counters() {
  thread_local EvalCounters counters;
  return counters;
}

void reset_eval_counters() { eval_counters() = EvalCounters{}; }

namespace {

Tensor obs_tensor(const Observation& obs) {
  return Tensor({static_cast<int>(obs.size())}, obs);
}

// Forward in the model's native (normalized) space, no stats applied.
struct RawForward {
  Tensor feature;
  Tensor proposal_flat;  // K*T*|A|
  Tensor scores;         // K
};

RawForward raw_forward(const ChoicePolicyModel& m, const Observation& obs,
                       MlpTrace* enc_tr = nullptr, MlpTrace* prop_tr = nullptr,
                       MlpTrace* score_tr = nullptr) {
  if (static_cast<int>(obs.size()) != m.config.obs_dim) {
    throw std::invalid_argument("observation dim " + std::to_string(obs.size()) +
                                " does not match model obs_dim " +
                                std::to_string(m.config.obs_dim));
  }
  RawForward f;
  f.feature = num::mlp_forward(m.encoder, obs_tensor(obs), enc_tr);
  ++eval_counters().encoder;
  f.proposal_flat = num::mlp_forward(m.proposal_head, f.feature, prop_tr);
  ++eval_counters().proposal;
  f.scores = num::mlp_forward(m.score_head, f.feature, score_tr);
  ++eval_counters().score;
  return f;
}

// Proposal k, step t, dim a lives at flat index ((k*T)+t)*|A| + a.
std::vector<ActionChunk> reshape_proposals(const Tensor& flat, const ModelConfig& c) {
  std::vector<ActionChunk> out;
  out.reserve(static_cast<std::size_t>(c.k));
  for (int k = 0; k < c.k; ++k) {
    ActionChunk chunk(c.horizon, c.action_dim);
    std::size_t base = static_cast<std::size_t>(k) * c.chunk_size();
    std::copy(flat.data().begin() + base, flat.data().begin() + base + c.chunk_size(),
              chunk.values.begin());
    out.push_back(std::move(chunk));
  }
  return out;
}

}  // namespace

ProposalSet propose(const ChoicePolicyModel& model, const Observation& obs) {
  std::vector<double> nobs = model.stats.normalize_obs(obs);
  RawForward f = raw_forward(model, nobs);
  ProposalSet set;
  set.proposals = reshape_proposals(f.proposal_flat, model.config);
  for (ActionChunk& p : set.proposals) p = model.stats.denormalize_chunk(p);
  set.scores = f.scores.data();
  return set;
}

double chunk_mse(const ActionChunk& a, const ActionChunk& b) {
  if (!a.same_shape(b)) {
    throw std::invalid_argument("chunk_mse: shape mismatch");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    double d = a.values[i] - b.values[i];
    acc += d * d;
  }
  return acc / static_cast<double>(a.values.size());
}

std::vector<double> per_proposal_losses(const ProposalSet& set, const ActionChunk& gt) {
  std::vector<double> losses;
  losses.reserve(set.proposals.size());
  for (const ActionChunk& p : set.proposals) losses.push_back(chunk_mse(p, gt));
  return losses;
}

int select_winner(std::span<const double> losses) {
  if (losses.empty()) throw std::invalid_argument("select_winner: empty losses");
  int best = 0;
  for (int i = 1; i < static_cast<int>(losses.size()); ++i) {
    if (losses[static_cast<std::size_t>(i)] < losses[static_cast<std::size_t>(best)]) {
      best = i;
    }
  }
  return best;
}

namespace {

LossBreakdown loss_from_forward(const RawForward& f, const ModelConfig& c,
                                const ActionChunk& gt, std::vector<double>* losses_out) {
  ProposalSet set;
  set.proposals = reshape_proposals(f.proposal_flat, c);
  set.scores = f.scores.data();
  std::vector<double> losses = per_proposal_losses(set, gt);
  LossBreakdown out;
  out.winner = select_winner(losses);
  out.action_loss = losses[static_cast<std::size_t>(out.winner)];
  double sacc = 0.0;
  for (int k = 0; k < c.k; ++k) {
    double d = set.scores[static_cast<std::size_t>(k)] - losses[static_cast<std::size_t>(k)];
    sacc += d * d;
  }
  out.score_loss = sacc / static_cast<double>(c.k);
  out.total = out.action_loss + out.score_loss;
  if (!std::isfinite(out.total)) {
    throw num::NumericalError("non-finite training loss");
  }
  if (losses_out) *losses_out = std::move(losses);
  return out;
}

}  // namespace

LossBreakdown training_loss(const ChoicePolicyModel& model, const Observation& obs,
                            const ActionChunk& gt) {
  if (!gt.same_shape(ActionChunk(model.config.horizon, model.config.action_dim))) {
    throw std::invalid_argument("training_loss: ground-truth chunk shape mismatch");
  }
  RawForward f = raw_forward(model, obs);
  return loss_from_forward(f, model.config, gt, nullptr);
}

ModelGrads make_zero_grads(const ChoicePolicyModel& model) {
  return ModelGrads{num::make_zero_grads(model.encoder),
                    num::make_zero_grads(model.proposal_head),
                    num::make_zero_grads(model.score_head)};
}

LossBreakdown training_loss_backward(const ChoicePolicyModel& model,
                                     const Observation& obs, const ActionChunk& gt,
                                     ModelGrads& accum, double scale) {
  const ModelConfig& c = model.config;
  MlpTrace enc_tr, prop_tr, score_tr;
  RawForward f = raw_forward(model, obs, &enc_tr, &prop_tr, &score_tr);
  std::vector<double> losses;
  LossBreakdown out = loss_from_forward(f, c, gt, &losses);

  // d action_loss / d proposal output: nonzero only on the winning slice.
  Tensor dprop(std::vector<int>{c.proposal_out()});
  double inv_chunk = 2.0 / static_cast<double>(c.chunk_size());
  std::size_t wbase = static_cast<std::size_t>(out.winner) * c.chunk_size();
  for (int i = 0; i < c.chunk_size(); ++i) {
    dprop[wbase + i] = inv_chunk * (f.proposal_flat[wbase + i] - gt.values[static_cast<std::size_t>(i)]);
  }

  // d score_loss / d scores; the targets l_k are constants here, so no
  // gradient flows back into the proposals through them.
  Tensor dscore(std::vector<int>{c.k});
  for (int k = 0; k < c.k; ++k) {
    dscore[static_cast<std::size_t>(k)] =
        2.0 / c.k * (f.scores[static_cast<std::size_t>(k)] - losses[static_cast<std::size_t>(k)]);
  }

  num::MlpBackwardResult prop_bwd = num::mlp_backward(model.proposal_head, prop_tr, dprop);
  num::MlpBackwardResult score_bwd = num::mlp_backward(model.score_head, score_tr, dscore);

  Tensor dfeat = prop_bwd.input_grad;
  for (std::size_t i = 0; i < dfeat.size(); ++i) dfeat[i] += score_bwd.input_grad[i];
  num::MlpBackwardResult enc_bwd = num::mlp_backward(model.encoder, enc_tr, dfeat);

  accum.encoder.add_scaled(enc_bwd.grads, scale);
  accum.proposal_head.add_scaled(prop_bwd.grads, scale);
  accum.score_head.add_scaled(score_bwd.grads, scale);
  return out;
}

int infer_index(const ProposalSet& set) {
  if (set.proposals.empty()) throw std::invalid_argument("infer_index: empty proposal set");
  return select_winner(set.scores);
}

ActionChunk infer(const ChoicePolicyModel& model, const Observation& obs) {
  ProposalSet set = propose(model, obs);
  return set.proposals[static_cast<std::size_t>(infer_index(set))];
}

void for_each_batch(std::size_t n, int batch_size, int epochs, std::uint64_t seed,
                    const std::function<void(int, std::span<const std::size_t>)>& fn) {
  if (n == 0) throw std::invalid_argument("for_each_batch: empty dataset");
  if (batch_size < 1) throw std::invalid_argument("for_each_batch: batch_size must be >= 1");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  num::Rng rng(seed);
  for (int e = 0; e < epochs; ++e) {
    num::Rng shuffle_rng = rng.split(static_cast<std::uint64_t>(e));
    for (std::size_t i = n; i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(shuffle_rng.uniform_int(static_cast<int>(i)));
      std::swap(order[i - 1], order[j]);
    }
    for (std::size_t start = 0; start < n; start += static_cast<std::size_t>(batch_size)) {
      std::size_t len = std::min(static_cast<std::size_t>(batch_size), n - start);
      fn(e, std::span<const std::size_t>(order.data() + start, len));
    }
  }
}

FitResult fit(ChoicePolicyModel& model, const ChunkedDataset& data, const FitConfig& config) {
  if (data.samples.empty()) throw std::invalid_argument("fit: empty dataset");
  if (data.obs_dim != model.config.obs_dim || data.horizon != model.config.horizon ||
      data.action_dim != model.config.action_dim) {
    throw std::invalid_argument("fit: dataset dims do not match model config");
  }

  model.stats = config.normalize
                    ? compute_stats(data)
                    : NormalizationStats::identity(data.obs_dim, data.action_dim);
  std::vector<ChunkedSample> train;
  train.reserve(data.samples.size());
  for (const ChunkedSample& s : data.samples) {
    train.push_back(ChunkedSample{model.stats.normalize_obs(s.obs),
                                  model.stats.normalize_chunk(s.target)});
  }

  num::AdamState enc_opt = num::make_adam(model.encoder, config.adam);
  num::AdamState prop_opt = num::make_adam(model.proposal_head, config.adam);
  num::AdamState score_opt = num::make_adam(model.score_head, config.adam);

  FitResult result;
  int cur_epoch = -1;
  double ep_total = 0.0, ep_action = 0.0, ep_score = 0.0;
  std::size_t ep_count = 0;
  auto flush_epoch = [&]() {
    if (cur_epoch >= 0 && ep_count > 0) {
      result.epoch_total.push_back(ep_total / static_cast<double>(ep_count));
      result.epoch_action.push_back(ep_action / static_cast<double>(ep_count));
      result.epoch_score.push_back(ep_score / static_cast<double>(ep_count));
    }
    ep_total = ep_action = ep_score = 0.0;
    ep_count = 0;
  };

  for_each_batch(train.size(), config.batch_size, config.epochs, config.seed,
                 [&](int epoch, std::span<const std::size_t> batch) {
                   if (epoch != cur_epoch) {
                     flush_epoch();
                     cur_epoch = epoch;
                   }
                   ModelGrads grads = make_zero_grads(model);
                   double scale = 1.0 / static_cast<double>(batch.size());
                   double batch_action = 0.0;
                   for (std::size_t idx : batch) {
                     LossBreakdown lb = training_loss_backward(model, train[idx].obs,
                                                               train[idx].target, grads, scale);
                     ep_total += lb.total;
                     ep_action += lb.action_loss;
                     ep_score += lb.score_loss;
                     batch_action += lb.action_loss * scale;
                     ++ep_count;
                   }
                   num::adam_step(enc_opt, model.encoder, grads.encoder);
                   num::adam_step(prop_opt, model.proposal_head, grads.proposal_head);
                   num::adam_step(score_opt, model.score_head, grads.score_head);
                   result.step_action.push_back(batch_action);
                 });
  flush_epoch();
  return result;
}

}  // namespace choice::policy

// Choice policy: a shared encoder trunk feeding a K-proposal action head and
// a score head. Training is winner-takes-all over the per-proposal errors
// with the score head regressed onto those errors as fixed targets; inference
// returns the proposal with the lowest predicted error, all in one forward
// pass.

#pragma once

#include <cstdint>
#include <functional>

#include "choice/numerics/adam.hpp"
#include "choice/numerics/mlp.hpp"
#include "choice/numerics/rng.hpp"
#include "choice/policy/types.hpp"

namespace choice::policy {

struct ModelConfig {
  int k = 5;
  int horizon = 8;
  int action_dim = 2;
  int obs_dim = 2;
  int feature_dim = 64;
  int encoder_hidden = 64;
  int head_hidden = 128;

  int chunk_size() const { return horizon * action_dim; }
  int proposal_out() const { return k * horizon * action_dim; }
};

struct ChoicePolicyModel {
  ModelConfig config;
  NormalizationStats stats;      // identity until fit() installs dataset stats
  num::MlpParams encoder;        // obs_dim -> hidden -> hidden -> feature_dim
  num::MlpParams proposal_head;  // feature_dim -> head_hidden -> K*T*|A|
  num::MlpParams score_head;     // feature_dim -> head_hidden -> K
};

// Component init draws come from split streams of `rng` (encoder, proposal
// head, score head in that order), so models built from the same seed share
// component initializations regardless of what else the seed was used for.
ChoicePolicyModel make_choice_model(const ModelConfig& config, num::Rng rng);

// Per-thread forward-pass counters, for asserting the single-pass property.
struct EvalCounters {
  std::size_t encoder = 0;
  std::size_t proposal = 0;
  std::size_t score = 0;
};
EvalCounters& eval_counters();
void reset_eval_counters();

// One deterministic forward pass. Observations are z-scored with the model's
// stats on the way in and proposals mapped back to raw action units on the
// way out; scores remain estimates of normalized-space MSE (used for ranking
// only). Proposal k is the contiguous slice [(k*T+t)*|A| + a] of the head
// output.
ProposalSet propose(const ChoicePolicyModel& model, const Observation& obs);

// Mean over all T*|A| entries of the squared difference, one value per
// proposal.
std::vector<double> per_proposal_losses(const ProposalSet& set, const ActionChunk& gt);
double chunk_mse(const ActionChunk& a, const ActionChunk& b);

// Index of the smallest loss; ties break to the lowest index.
int select_winner(std::span<const double> losses);

struct LossBreakdown {
  double total = 0.0;
  double action_loss = 0.0;
  double score_loss = 0.0;
  int winner = -1;
};

// Forward-only training objective in the trainer's (normalized) space:
//   action_loss = l_{k*},  k* = argmin_k l_k
//   score_loss  = (1/K) sum_k (sigma_k - l_k)^2, with l_k a fixed target.
LossBreakdown training_loss(const ChoicePolicyModel& model, const Observation& obs,
                            const ActionChunk& gt);

struct ModelGrads {
  num::MlpGrads encoder;
  num::MlpGrads proposal_head;
  num::MlpGrads score_head;
};
ModelGrads make_zero_grads(const ChoicePolicyModel& model);

// training_loss plus reverse pass. Gradient flow: action_loss reaches the
// winning proposal slice and the encoder; score_loss reaches the score head
// and the encoder; the score targets l_k are detached.
LossBreakdown training_loss_backward(const ChoicePolicyModel& model,
                                     const Observation& obs, const ActionChunk& gt,
                                     ModelGrads& accum, double scale = 1.0);

// propose + argmin over predicted scores, single forward pass.
ActionChunk infer(const ChoicePolicyModel& model, const Observation& obs);
int infer_index(const ProposalSet& set);

struct FitConfig {
  int epochs = 60;
  int batch_size = 64;
  std::uint64_t seed = 1;
  num::AdamConfig adam;
  bool normalize = true;  // compute dataset stats and train in z-scored space
};

struct FitResult {
  std::vector<double> epoch_total;
  std::vector<double> epoch_action;
  std::vector<double> epoch_score;
  // Batch-mean action loss per optimizer step, used by reduction checks.
  std::vector<double> step_action;
};

// Deterministic for a given (dataset, config, seed): shuffling, batching, and
// update order are all derived from config.seed.
FitResult fit(ChoicePolicyModel& model, const ChunkedDataset& data, const FitConfig& config);

// Shared batching schedule so trainers that must match step-for-step (the
// K=1 reduction against behavior cloning) shuffle identically.
void for_each_batch(std::size_t n, int batch_size, int epochs, std::uint64_t seed,
                    const std::function<void(int epoch, std::span<const std::size_t> batch)>& fn);

}  // namespace choice::policy

// Behavior cloning baseline: the same encoder trunk with a single action
// head and plain chunk-MSE regression. Initialization streams and the batch
// schedule match the choice trainer, so a K=1 choice model with a zeroed
// score head reproduces this trainer step for step.

#pragma once

#include "choice/policy/choice_policy.hpp"

namespace choice::baselines {

using policy::ActionChunk;
using policy::ChunkedDataset;
using policy::FitConfig;
using policy::FitResult;
using policy::ModelConfig;
using policy::NormalizationStats;
using policy::Observation;

struct BcModel {
  ModelConfig config;  // k is ignored (single head)
  NormalizationStats stats;
  num::MlpParams encoder;      // obs_dim -> hidden -> hidden -> feature_dim
  num::MlpParams action_head;  // feature_dim -> head_hidden -> T*|A|
};

// Encoder and head draw from rng.split(0) and rng.split(1), the same streams
// a choice model's encoder and proposal head use.
BcModel make_bc_model(const ModelConfig& config, num::Rng rng);

FitResult bc_fit(BcModel& model, const ChunkedDataset& data, const FitConfig& config);

// Single forward pass; raw observation in, raw-unit chunk out.
ActionChunk bc_infer(const BcModel& model, const Observation& obs);

// Mean squared chunk error in the model's normalized space (forward only).
double bc_loss(const BcModel& model, const Observation& obs, const ActionChunk& gt);

}  // namespace choice::baselines

// Full-model checkpoints: the MLP parameter format plus a model-kind tag,
// the shape config, normalization stats, and the task the model was trained
// for. Loads refuse unknown schemas and inconsistent shape configs.

#pragma once

#include <optional>
#include <string>

#include "choice/baselines/bc.hpp"
#include "choice/baselines/denoiser.hpp"
#include "choice/policy/choice_policy.hpp"

namespace choice::harness {

inline constexpr const char* kCheckpointSchema = "choice-checkpoint v1";

enum class ModelKind { kChoice, kBc, kDenoiser };

std::string model_kind_name(ModelKind kind);

struct Checkpoint {
  ModelKind kind = ModelKind::kChoice;
  std::string task;
  std::string config_hash;
  std::optional<policy::ChoicePolicyModel> choice;
  std::optional<baselines::BcModel> bc;
  std::optional<baselines::DenoiserModel> denoiser;
};

void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace choice::harness

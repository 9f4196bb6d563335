#include "choice/harness/model_io.hpp"

#include <fstream>

#include <json.hpp>

#include "choice/harness/config.hpp"
#include "choice/numerics/checkpoint.hpp"

namespace choice::harness {

using nlohmann::json;

std::string model_kind_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::kChoice: return "choice";
    case ModelKind::kBc: return "bc";
    case ModelKind::kDenoiser: return "denoiser";
  }
  return "?";
}

namespace {

json stats_to_json(const policy::NormalizationStats& s) {
  return json{{"obs_mean", s.obs_mean},
              {"obs_std", s.obs_std},
              {"act_mean", s.act_mean},
              {"act_std", s.act_std}};
}

policy::NormalizationStats stats_from_json(const json& j) {
  policy::NormalizationStats s;
  s.obs_mean = j.at("obs_mean").get<std::vector<double>>();
  s.obs_std = j.at("obs_std").get<std::vector<double>>();
  s.act_mean = j.at("act_mean").get<std::vector<double>>();
  s.act_std = j.at("act_std").get<std::vector<double>>();
  return s;
}

json model_config_to_json(const policy::ModelConfig& c) {
  return json{{"k", c.k},
              {"horizon", c.horizon},
              {"action_dim", c.action_dim},
              {"obs_dim", c.obs_dim},
              {"feature_dim", c.feature_dim},
              {"encoder_hidden", c.encoder_hidden},
              {"head_hidden", c.head_hidden}};
}

policy::ModelConfig model_config_from_json(const json& j) {
  policy::ModelConfig c;
  c.k = j.at("k").get<int>();
  c.horizon = j.at("horizon").get<int>();
  c.action_dim = j.at("action_dim").get<int>();
  c.obs_dim = j.at("obs_dim").get<int>();
  c.feature_dim = j.at("feature_dim").get<int>();
  c.encoder_hidden = j.at("encoder_hidden").get<int>();
  c.head_hidden = j.at("head_hidden").get<int>();
  return c;
}

}  // namespace

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
  json j;
  j["schema"] = kCheckpointSchema;
  j["kind"] = model_kind_name(ckpt.kind);
  j["task"] = ckpt.task;
  j["config_hash"] = ckpt.config_hash;
  switch (ckpt.kind) {
    case ModelKind::kChoice: {
      const policy::ChoicePolicyModel& m = ckpt.choice.value();
      j["config"] = model_config_to_json(m.config);
      j["stats"] = stats_to_json(m.stats);
      j["encoder"] = num::mlp_to_json(m.encoder);
      j["proposal_head"] = num::mlp_to_json(m.proposal_head);
      j["score_head"] = num::mlp_to_json(m.score_head);
      break;
    }
    case ModelKind::kBc: {
      const baselines::BcModel& m = ckpt.bc.value();
      j["config"] = model_config_to_json(m.config);
      j["stats"] = stats_to_json(m.stats);
      j["encoder"] = num::mlp_to_json(m.encoder);
      j["action_head"] = num::mlp_to_json(m.action_head);
      break;
    }
    case ModelKind::kDenoiser: {
      const baselines::DenoiserModel& m = ckpt.denoiser.value();
      j["config"] = json{{"horizon", m.config.horizon},
                         {"action_dim", m.config.action_dim},
                         {"obs_dim", m.config.obs_dim},
                         {"feature_dim", m.config.feature_dim},
                         {"encoder_hidden", m.config.encoder_hidden},
                         {"noise_hidden", m.config.noise_hidden},
                         {"steps", m.config.steps},
                         {"beta_min", m.config.beta_min},
                         {"beta_max", m.config.beta_max}};
      j["stats"] = stats_to_json(m.stats);
      j["encoder"] = num::mlp_to_json(m.encoder);
      j["noise_net"] = num::mlp_to_json(m.noise_net);
      j["betas"] = m.betas;
      j["alpha_bars"] = m.alpha_bars;
      break;
    }
  }
  std::ofstream out(path);
  if (!out) throw DataError("cannot open checkpoint for write: " + path);
  out << j.dump(2) << "\n";
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open checkpoint: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError("malformed checkpoint " + path + ": " + e.what());
  }
  if (j.value("schema", "") != kCheckpointSchema) {
    throw DataError("unrecognized checkpoint schema in " + path);
  }
  Checkpoint ckpt;
  ckpt.task = j.value("task", "");
  ckpt.config_hash = j.value("config_hash", "");
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "choice") {
    ckpt.kind = ModelKind::kChoice;
    policy::ChoicePolicyModel m;
    m.config = model_config_from_json(j.at("config"));
    m.stats = stats_from_json(j.at("stats"));
    m.encoder = num::mlp_from_json(j.at("encoder"));
    m.proposal_head = num::mlp_from_json(j.at("proposal_head"));
    m.score_head = num::mlp_from_json(j.at("score_head"));
    if (m.proposal_head.output_dim() != m.config.proposal_out() ||
        m.score_head.output_dim() != m.config.k ||
        m.encoder.input_dim() != m.config.obs_dim) {
      throw DataError("checkpoint " + path + ": parameter shapes do not match config");
    }
    ckpt.choice = std::move(m);
  } else if (kind == "bc") {
    ckpt.kind = ModelKind::kBc;
    baselines::BcModel m;
    m.config = model_config_from_json(j.at("config"));
    m.stats = stats_from_json(j.at("stats"));
    m.encoder = num::mlp_from_json(j.at("encoder"));
    m.action_head = num::mlp_from_json(j.at("action_head"));
    if (m.action_head.output_dim() != m.config.chunk_size() ||
        m.encoder.input_dim() != m.config.obs_dim) {
      throw DataError("checkpoint " + path + ": parameter shapes do not match config");
    }
    ckpt.bc = std::move(m);
  } else if (kind == "denoiser") {
    ckpt.kind = ModelKind::kDenoiser;
    baselines::DenoiserModel m;
    const json& c = j.at("config");
    m.config.horizon = c.at("horizon").get<int>();
    m.config.action_dim = c.at("action_dim").get<int>();
    m.config.obs_dim = c.at("obs_dim").get<int>();
    m.config.feature_dim = c.at("feature_dim").get<int>();
    m.config.encoder_hidden = c.at("encoder_hidden").get<int>();
    m.config.noise_hidden = c.at("noise_hidden").get<int>();
    m.config.steps = c.at("steps").get<int>();
    m.config.beta_min = c.at("beta_min").get<double>();
    m.config.beta_max = c.at("beta_max").get<double>();
    m.stats = stats_from_json(j.at("stats"));
    m.encoder = num::mlp_from_json(j.at("encoder"));
    m.noise_net = num::mlp_from_json(j.at("noise_net"));
    m.betas = j.at("betas").get<std::vector<double>>();
    m.alpha_bars = j.at("alpha_bars").get<std::vector<double>>();
    if (static_cast<int>(m.betas.size()) != m.config.steps) {
      throw DataError("checkpoint " + path + ": schedule length does not match steps");
    }
    ckpt.denoiser = std::move(m);
  } else {
    throw DataError("unknown model kind '" + kind + "' in " + path);
  }
  return ckpt;
}

}  // namespace choice::harness

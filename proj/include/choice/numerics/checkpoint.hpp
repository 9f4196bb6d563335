// JSON (de)serialization of MLP parameters. Doubles are emitted in
// shortest-round-trip form, so load(save(p)) is value-exact.

#pragma once

#include <json.hpp>

#include "choice/numerics/mlp.hpp"

namespace choice::num {

nlohmann::json mlp_to_json(const MlpParams& params);
MlpParams mlp_from_json(const nlohmann::json& j);

void save_mlp(const MlpParams& params, const std::string& path);
MlpParams load_mlp(const std::string& path);

}  // namespace choice::num

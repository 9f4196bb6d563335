#include "choice/numerics/checkpoint.hpp"

#include <fstream>

namespace choice::num {

using nlohmann::json;

json mlp_to_json(const MlpParams& params) {
  json j;
  j["layer_dims"] = params.layer_dims;
  j["activation"] = params.activation == Activation::kRelu ? "relu" : "identity";
  json ws = json::array();
  json bs = json::array();
  for (int l = 0; l < params.layer_count(); ++l) {
    ws.push_back(params.weights[l].data());
    bs.push_back(params.biases[l].data());
  }
  j["weights"] = std::move(ws);
  j["biases"] = std::move(bs);
  return j;
}

MlpParams mlp_from_json(const json& j) {
  MlpParams p;
  p.layer_dims = j.at("layer_dims").get<std::vector<int>>();
  std::string act = j.at("activation").get<std::string>();
  if (act == "relu") {
    p.activation = Activation::kRelu;
  } else if (act == "identity") {
    p.activation = Activation::kIdentity;
  } else {
    throw std::invalid_argument("unknown activation '" + act + "' in checkpoint");
  }
  const json& ws = j.at("weights");
  const json& bs = j.at("biases");
  if (ws.size() + 1 != p.layer_dims.size() || bs.size() != ws.size()) {
    throw std::invalid_argument("checkpoint layer count does not match layer_dims");
  }
  for (std::size_t l = 1; l < p.layer_dims.size(); ++l) {
    int in = p.layer_dims[l - 1];
    int out = p.layer_dims[l];
    p.weights.emplace_back(std::vector<int>{out, in},
                           ws[l - 1].get<std::vector<double>>());
    p.biases.emplace_back(std::vector<int>{out}, bs[l - 1].get<std::vector<double>>());
  }
  return p;
}

void save_mlp(const MlpParams& params, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for write: " + path);
  out << mlp_to_json(params).dump(2) << "\n";
}

MlpParams load_mlp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for read: " + path);
  json j;
  in >> j;
  return mlp_from_json(j);
}

}  // namespace choice::num

#include "choice/envs/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>

#include "choice/common/format.hpp"

namespace choice::envs {

std::vector<EpisodeRecord> generate_episodes(const TaskSpec& task, int count,
                                             std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("episode count must be >= 1");
  num::Rng root(seed);
  std::vector<EpisodeRecord> episodes;
  episodes.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    num::Rng ep_rng = root.split(static_cast<std::uint64_t>(i));
    int mode = ep_rng.uniform_int(task.mode_count);
    EpisodeRecord ep = scripted_demonstrator(task, mode, ep_rng.split(0));
    ep.id = i;
    episodes.push_back(std::move(ep));
  }
  return episodes;
}

void write_dataset(const std::string& path, const TaskSpec& task,
                   const std::vector<EpisodeRecord>& episodes, std::uint64_t seed,
                   const std::string& config_hash) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for write: " + path);
  const std::vector<std::string>& phases = phase_names(task.kind);
  out << "choice-dataset v1 task=" << task_name(task.kind) << " seed=" << seed
      << " episodes=" << episodes.size() << " obs_dim=" << task.obs_dim()
      << " action_dim=" << task.action_dim() << " mode_count=" << task.mode_count
      << " config_hash=" << config_hash << "\n";
  for (const EpisodeRecord& ep : episodes) {
    for (std::size_t t = 0; t < ep.steps.size(); ++t) {
      const EpisodeStep& s = ep.steps[t];
      out << ep.id << ' ' << t << ' ' << phases[static_cast<std::size_t>(s.phase)];
      for (double v : s.obs) out << ' ' << fmt_real(v);
      for (double v : s.action) out << ' ' << fmt_real(v);
      out << ' ' << ep.mode << "\n";
    }
  }
}

namespace {

std::map<std::string, std::string> parse_kv(const std::vector<std::string>& tokens,
                                            std::size_t from) {
  std::map<std::string, std::string> kv;
  for (std::size_t i = from; i < tokens.size(); ++i) {
    std::size_t eq = tokens[i].find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("malformed header token '" + tokens[i] + "'");
    }
    kv[tokens[i].substr(0, eq)] = tokens[i].substr(eq + 1);
  }
  return kv;
}

}  // namespace

Dataset read_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for read: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty dataset file: " + path);
  std::vector<std::string> head = split_ws(line);
  if (head.size() < 2 || head[0] != "choice-dataset" || head[1] != "v1") {
    throw std::runtime_error("unrecognized dataset schema in " + path);
  }
  auto kv = parse_kv(head, 2);

  Dataset ds;
  ds.header.task = kv.at("task");
  ds.header.seed = static_cast<std::uint64_t>(std::stoull(kv.at("seed")));
  ds.header.episodes = static_cast<int>(parse_long(kv.at("episodes")));
  ds.header.obs_dim = static_cast<int>(parse_long(kv.at("obs_dim")));
  ds.header.action_dim = static_cast<int>(parse_long(kv.at("action_dim")));
  ds.header.mode_count = static_cast<int>(parse_long(kv.at("mode_count")));
  ds.header.config_hash = kv.count("config_hash") ? kv.at("config_hash") : "";

  std::optional<TaskKind> kind = parse_task(ds.header.task);
  if (!kind) throw std::runtime_error("unknown task '" + ds.header.task + "' in " + path);
  const std::vector<std::string>& phases = phase_names(*kind);

  std::map<int, EpisodeRecord> by_id;
  std::size_t expected = 3 + static_cast<std::size_t>(ds.header.obs_dim) +
                         static_cast<std::size_t>(ds.header.action_dim) + 1;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> tok = split_ws(line);
    if (tok.size() != expected) {
      throw std::runtime_error("dataset line " + std::to_string(line_no) + ": expected " +
                               std::to_string(expected) + " fields, got " +
                               std::to_string(tok.size()));
    }
    int ep_id = static_cast<int>(parse_long(tok[0]));
    EpisodeStep step;
    int phase = -1;
    for (std::size_t p = 0; p < phases.size(); ++p) {
      if (phases[p] == tok[2]) phase = static_cast<int>(p);
    }
    if (phase < 0) {
      throw std::runtime_error("dataset line " + std::to_string(line_no) +
                               ": unknown phase '" + tok[2] + "'");
    }
    step.phase = phase;
    std::size_t pos = 3;
    for (int i = 0; i < ds.header.obs_dim; ++i) step.obs.push_back(parse_real(tok[pos++]));
    for (int i = 0; i < ds.header.action_dim; ++i) {
      step.action.push_back(parse_real(tok[pos++]));
    }
    EpisodeRecord& ep = by_id[ep_id];
    ep.id = ep_id;
    ep.mode = static_cast<int>(parse_long(tok[pos]));
    ep.steps.push_back(std::move(step));
  }
  for (auto& [id, ep] : by_id) ds.episodes.push_back(std::move(ep));
  if (static_cast<int>(ds.episodes.size()) != ds.header.episodes) {
    throw std::runtime_error("dataset episode count mismatch: header says " +
                             std::to_string(ds.header.episodes) + ", found " +
                             std::to_string(ds.episodes.size()));
  }
  return ds;
}

policy::ChunkedDataset make_chunked(const std::vector<EpisodeRecord>& episodes, int horizon) {
  if (episodes.empty()) throw std::invalid_argument("make_chunked: no episodes");
  if (horizon < 1) throw std::invalid_argument("make_chunked: horizon must be >= 1");
  policy::ChunkedDataset out;
  out.obs_dim = static_cast<int>(episodes.front().steps.front().obs.size());
  out.action_dim = static_cast<int>(episodes.front().steps.front().action.size());
  out.horizon = horizon;
  for (const EpisodeRecord& ep : episodes) {
    int n = static_cast<int>(ep.steps.size());
    for (int t = 0; t < n; ++t) {
      policy::ChunkedSample smp;
      smp.obs = ep.steps[static_cast<std::size_t>(t)].obs;
      smp.target = policy::ActionChunk(horizon, out.action_dim);
      for (int j = 0; j < horizon; ++j) {
        // repeat the final action past the episode end
        const std::vector<double>& act =
            ep.steps[static_cast<std::size_t>(std::min(t + j, n - 1))].action;
        for (int a = 0; a < out.action_dim; ++a) smp.target.at(j, a) = act[static_cast<std::size_t>(a)];
      }
      out.samples.push_back(std::move(smp));
    }
  }
  return out;
}

}  // namespace choice::envs

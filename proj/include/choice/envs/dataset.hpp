// Demonstration dataset: generation, the line-delimited text format, and the
// adapter that turns episodes into fixed-horizon (observation, chunk) pairs.
//
// File layout: one header line
//   choice-dataset v1 task=<name> seed=<n> episodes=<n> obs_dim=<n>
//     action_dim=<n> mode_count=<n> config_hash=<hex>
// followed by one line per step:
//   <episode> <t> <phase-name> <obs...> <action...> <mode>
// Reals carry 17 significant digits, so a round trip is value-exact.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "choice/envs/demonstrator.hpp"
#include "choice/policy/types.hpp"

namespace choice::envs {

struct DatasetHeader {
  std::string schema = "choice-dataset v1";
  std::string task;
  std::uint64_t seed = 0;
  int episodes = 0;
  int obs_dim = 0;
  int action_dim = 0;
  int mode_count = 0;
  std::string config_hash;  // producing config, hex
};

struct Dataset {
  DatasetHeader header;
  std::vector<EpisodeRecord> episodes;
};

// Scripted demonstrations with uniformly sampled modes; episode i draws from
// the split stream (seed, i), so any episode regenerates independently.
std::vector<EpisodeRecord> generate_episodes(const TaskSpec& task, int count,
                                             std::uint64_t seed);

void write_dataset(const std::string& path, const TaskSpec& task,
                   const std::vector<EpisodeRecord>& episodes, std::uint64_t seed,
                   const std::string& config_hash);

Dataset read_dataset(const std::string& path);

// (obs, T-step chunk) pairs from every step of every episode; chunks past
// the episode end repeat the final action.
policy::ChunkedDataset make_chunked(const std::vector<EpisodeRecord>& episodes, int horizon);

}  // namespace choice::envs

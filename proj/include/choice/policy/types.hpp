// Core value types shared by the choice policy and the baselines.

#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace choice::policy {

// Concatenated per-step feature vector fed to a policy.
using Observation = std::vector<double>;

// A T x |A| action trajectory segment, row-major by time step.
struct ActionChunk {
  int horizon = 0;
  int action_dim = 0;
  std::vector<double> values;  // values[t * action_dim + a]

  ActionChunk() = default;
  ActionChunk(int t, int a)
      : horizon(t), action_dim(a),
        values(static_cast<std::size_t>(t) * static_cast<std::size_t>(a), 0.0) {
    if (t < 1 || a < 1) throw std::invalid_argument("ActionChunk dims must be >= 1");
  }

  double& at(int t, int a) { return values[static_cast<std::size_t>(t) * action_dim + a]; }
  double at(int t, int a) const { return values[static_cast<std::size_t>(t) * action_dim + a]; }
  std::size_t size() const { return values.size(); }
  bool same_shape(const ActionChunk& o) const {
    return horizon == o.horizon && action_dim == o.action_dim;
  }

  // First time step as a flat action vector (receding-horizon execution).
  std::vector<double> first_action() const {
    return std::vector<double>(values.begin(), values.begin() + action_dim);
  }
};

// K candidate chunks plus K predicted scores for one observation. A score is
// the model's estimate of that proposal's mean squared error against the
// (unseen) ground truth, so lower is better.
struct ProposalSet {
  std::vector<ActionChunk> proposals;
  std::vector<double> scores;

  int k() const { return static_cast<int>(proposals.size()); }
};

// Per-dimension z-score statistics, computed from the training set only.
// Standard deviations are floored at 1e-6.
struct NormalizationStats {
  std::vector<double> obs_mean, obs_std;
  std::vector<double> act_mean, act_std;

  static NormalizationStats identity(int obs_dim, int act_dim);
  bool is_identity() const;

  std::vector<double> normalize_obs(std::span<const double> obs) const;
  ActionChunk normalize_chunk(const ActionChunk& chunk) const;
  ActionChunk denormalize_chunk(const ActionChunk& chunk) const;
};

// One supervised pair: observation and the ground-truth chunk starting there.
struct ChunkedSample {
  Observation obs;
  ActionChunk target;
};

struct ChunkedDataset {
  int obs_dim = 0;
  int horizon = 0;
  int action_dim = 0;
  std::vector<ChunkedSample> samples;

  std::size_t size() const { return samples.size(); }
};

NormalizationStats compute_stats(const ChunkedDataset& data);

}  // namespace choice::policy

#include "choice/policy/types.hpp"

#include <algorithm>
#include <cmath>

namespace choice::policy {

NormalizationStats NormalizationStats::identity(int obs_dim, int act_dim) {
  NormalizationStats s;
  s.obs_mean.assign(static_cast<std::size_t>(obs_dim), 0.0);
  s.obs_std.assign(static_cast<std::size_t>(obs_dim), 1.0);
  s.act_mean.assign(static_cast<std::size_t>(act_dim), 0.0);
  s.act_std.assign(static_cast<std::size_t>(act_dim), 1.0);
  return s;
}

bool NormalizationStats::is_identity() const {
  auto all = [](const std::vector<double>& v, double x) {
    return std::all_of(v.begin(), v.end(), [x](double e) { return e == x; });
  };
  return all(obs_mean, 0.0) && all(obs_std, 1.0) && all(act_mean, 0.0) && all(act_std, 1.0);
}

std::vector<double> NormalizationStats::normalize_obs(std::span<const double> obs) const {
  if (obs.size() != obs_mean.size()) {
    throw std::invalid_argument("normalize_obs: dim mismatch");
  }
  std::vector<double> out(obs.size());
  for (std::size_t i = 0; i < obs.size(); ++i) {
    out[i] = (obs[i] - obs_mean[i]) / obs_std[i];
  }
  return out;
}

ActionChunk NormalizationStats::normalize_chunk(const ActionChunk& chunk) const {
  if (static_cast<std::size_t>(chunk.action_dim) != act_mean.size()) {
    throw std::invalid_argument("normalize_chunk: action dim mismatch");
  }
  ActionChunk out = chunk;
  for (int t = 0; t < chunk.horizon; ++t) {
    for (int a = 0; a < chunk.action_dim; ++a) {
      out.at(t, a) = (chunk.at(t, a) - act_mean[static_cast<std::size_t>(a)]) /
                     act_std[static_cast<std::size_t>(a)];
    }
  }
  return out;
}

ActionChunk NormalizationStats::denormalize_chunk(const ActionChunk& chunk) const {
  if (static_cast<std::size_t>(chunk.action_dim) != act_mean.size()) {
    throw std::invalid_argument("denormalize_chunk: action dim mismatch");
  }
  ActionChunk out = chunk;
  for (int t = 0; t < chunk.horizon; ++t) {
    for (int a = 0; a < chunk.action_dim; ++a) {
      out.at(t, a) = chunk.at(t, a) * act_std[static_cast<std::size_t>(a)] +
                     act_mean[static_cast<std::size_t>(a)];
    }
  }
  return out;
}

NormalizationStats compute_stats(const ChunkedDataset& data) {
  if (data.samples.empty()) throw std::invalid_argument("compute_stats: empty dataset");
  std::size_t od = static_cast<std::size_t>(data.obs_dim);
  std::size_t ad = static_cast<std::size_t>(data.action_dim);
  NormalizationStats s;
  s.obs_mean.assign(od, 0.0);
  s.obs_std.assign(od, 0.0);
  s.act_mean.assign(ad, 0.0);
  s.act_std.assign(ad, 0.0);

  double n_obs = static_cast<double>(data.samples.size());
  for (const ChunkedSample& smp : data.samples) {
    for (std::size_t i = 0; i < od; ++i) s.obs_mean[i] += smp.obs[i];
  }
  for (std::size_t i = 0; i < od; ++i) s.obs_mean[i] /= n_obs;

  double n_act = n_obs * data.horizon;
  for (const ChunkedSample& smp : data.samples) {
    for (int t = 0; t < data.horizon; ++t) {
      for (std::size_t a = 0; a < ad; ++a) {
        s.act_mean[a] += smp.target.at(t, static_cast<int>(a));
      }
    }
  }
  for (std::size_t a = 0; a < ad; ++a) s.act_mean[a] /= n_act;

  for (const ChunkedSample& smp : data.samples) {
    for (std::size_t i = 0; i < od; ++i) {
      double d = smp.obs[i] - s.obs_mean[i];
      s.obs_std[i] += d * d;
    }
    for (int t = 0; t < data.horizon; ++t) {
      for (std::size_t a = 0; a < ad; ++a) {
        double d = smp.target.at(t, static_cast<int>(a)) - s.act_mean[a];
        s.act_std[a] += d * d;
      }
    }
  }
  for (std::size_t i = 0; i < od; ++i) {
    s.obs_std[i] = std::max(std::sqrt(s.obs_std[i] / n_obs), 1e-6);
  }
  for (std::size_t a = 0; a < ad; ++a) {
    s.act_std[a] = std::max(std::sqrt(s.act_std[a] / n_act), 1e-6);
  }
  return s;
}

}  // namespace choice::policy

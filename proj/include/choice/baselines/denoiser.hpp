// Iterative-denoising baseline: an epsilon-prediction network over action
// chunks with an S-step variance schedule. Exists for the multimodality and
// latency comparisons; deliberately minimal.

#pragma once

#include "choice/numerics/adam.hpp"
#include "choice/numerics/mlp.hpp"
#include "choice/numerics/rng.hpp"
#include "choice/policy/types.hpp"

namespace choice::baselines {

struct DenoiserConfig {
  int horizon = 8;
  int action_dim = 2;
  int obs_dim = 2;
  int feature_dim = 64;
  int encoder_hidden = 64;
  int noise_hidden = 128;
  int steps = 50;
  double beta_min = 1e-3;
  double beta_max = 0.25;

  int chunk_size() const { return horizon * action_dim; }
};

// Time-step embedding width fed to the noise net alongside feature + chunk.
inline constexpr int kStepEmbedDim = 4;

struct DenoiserModel {
  DenoiserConfig config;
  policy::NormalizationStats stats;
  num::MlpParams encoder;    // obs_dim -> hidden -> hidden -> feature_dim
  num::MlpParams noise_net;  // feature+chunk+embed -> hidden -> chunk
  std::vector<double> betas;       // per-step variance, increasing in (0,1)
  std::vector<double> alpha_bars;  // cumulative products of (1 - beta)
};

DenoiserModel make_denoiser(const DenoiserConfig& config, num::Rng rng);

struct DenoiserFitConfig {
  int epochs = 200;
  int batch_size = 64;
  std::uint64_t seed = 1;
  num::AdamConfig adam;
  bool normalize = true;
};

std::vector<double> denoiser_fit(DenoiserModel& model, const policy::ChunkedDataset& data,
                                 const DenoiserFitConfig& config);

// Stochastic: draws the initial chunk and per-step noise from rng. Output is
// in raw action units. Throws NumericalError if the sample goes non-finite.
policy::ActionChunk denoiser_sample(const DenoiserModel& model,
                                    const policy::Observation& obs, num::Rng& rng);

// Deterministic reverse pass from a given initial (normalized-space) chunk
// with all injected noise zero. denoiser_sample is this plus noise.
policy::ActionChunk denoiser_denoise(const DenoiserModel& model,
                                     const policy::Observation& obs,
                                     const policy::ActionChunk& initial);

}  // namespace choice::baselines

// Scripted waypoint-following experts. The mode latent selects which of the
// task's valid routes is demonstrated; small seeded noise is added to every
// action. Every generated episode satisfies the task's success predicate, or
// generation throws.

#pragma once

#include <cstdint>

#include "choice/envs/world.hpp"
#include "choice/numerics/rng.hpp"

namespace choice::envs {

struct EpisodeStep {
  Observation obs;
  std::vector<double> action;
  int phase = 0;  // phase at observation time
};

struct EpisodeRecord {
  int id = 0;
  std::uint64_t seed = 0;
  int mode = 0;
  std::vector<EpisodeStep> steps;
};

EpisodeRecord scripted_demonstrator(const TaskSpec& task, int mode, num::Rng rng);

}  // namespace choice::envs

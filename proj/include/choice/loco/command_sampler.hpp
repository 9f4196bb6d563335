// Velocity-command sampling for locomotion training: static stand commands
// are drawn with probability 0.1, otherwise velocities are uniform within
// the configured ranges.

#pragma once

#include "choice/loco/frame.hpp"
#include "choice/numerics/rng.hpp"

namespace choice::loco {

struct CommandRanges {
  double vx_min = -0.6, vx_max = 1.0;
  double vy_min = -0.4, vy_max = 0.4;
  double yaw_min = -0.6, yaw_max = 0.6;
  double stand_probability = 0.1;
};

LocoCommand sample_training_command(num::Rng& rng, const CommandRanges& ranges = {});

}  // namespace choice::loco

#include "choice/loco/command_sampler.hpp"

namespace choice::loco {

LocoCommand sample_training_command(num::Rng& rng, const CommandRanges& ranges) {
  if (rng.uniform() < ranges.stand_probability) {
    return LocoCommand::stand();
  }
  LocoCommand cmd;
  cmd.vx = rng.uniform(ranges.vx_min, ranges.vx_max);
  cmd.vy = rng.uniform(ranges.vy_min, ranges.vy_max);
  cmd.yaw_rate = rng.uniform(ranges.yaw_min, ranges.yaw_max);
  cmd.move = 1;
  return cmd;
}

}  // namespace choice::loco

#include "choice/teleop/hand.hpp"

#include <algorithm>

namespace choice::teleop {

HandCommand hand_from_inputs(double grip, double thumb, const HandConfig& config) {
  HandCommand cmd;
  cmd.grip = std::clamp(grip, 0.0, 1.0);
  cmd.thumb = std::clamp(thumb, 0.0, 1.0);
  cmd.input_clamped = cmd.grip != grip || cmd.thumb != thumb;
  double grouped = config.fingers.open + cmd.grip * (config.fingers.closed - config.fingers.open);
  for (int i = 0; i < 4; ++i) cmd.finger_targets[static_cast<std::size_t>(i)] = grouped;
  cmd.finger_targets[4] =
      config.thumb.open + cmd.thumb * (config.thumb.closed - config.thumb.open);
  return cmd;
}

}  // namespace choice::teleop

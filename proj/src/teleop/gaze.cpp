#include "choice/teleop/gaze.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace choice::teleop {

GazeCommand gaze_from_hand(const std::array<double, 3>& hand,
                           const std::array<double, 3>& head, const GazeLimits& limits) {
  double rx = hand[0] - head[0];
  double ry = hand[1] - head[1];
  double rz = hand[2] - head[2];
  if (rx == 0.0 && ry == 0.0 && rz == 0.0) {
    throw std::invalid_argument("gaze_from_hand: hand and head positions coincide");
  }
  GazeCommand cmd;
  double yaw = std::atan2(ry, rx);
  double pitch = std::atan2(-rz, std::sqrt(rx * rx + ry * ry));
  cmd.yaw = std::clamp(yaw, limits.yaw.min, limits.yaw.max);
  cmd.pitch = std::clamp(pitch, limits.pitch.min, limits.pitch.max);
  cmd.yaw_clipped = cmd.yaw != yaw;
  cmd.pitch_clipped = cmd.pitch != pitch;
  cmd.roll = 0.0;
  return cmd;
}

}  // namespace choice::teleop

// Hand-eye coordination: steer the head so the camera keeps the selected
// hand in view. Yaw is the azimuth of the head-to-hand vector in the xy
// plane, pitch its elevation, roll fixed to zero; every angle is clipped to
// its joint limit.

#pragma once

#include <array>

namespace choice::teleop {

struct AngleLimit {
  double min;
  double max;
};

struct GazeLimits {
  AngleLimit yaw{-1.5708, 1.5708};
  AngleLimit pitch{-0.8727, 0.8727};
};

struct GazeCommand {
  double yaw = 0.0;
  double pitch = 0.0;
  double roll = 0.0;  // always 0
  bool yaw_clipped = false;
  bool pitch_clipped = false;
};

// hand and head positions in the robot base frame; throws if they coincide
// (the direction is undefined).
GazeCommand gaze_from_hand(const std::array<double, 3>& hand,
                           const std::array<double, 3>& head, const GazeLimits& limits);

}  // namespace choice::teleop

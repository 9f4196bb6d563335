// Grasp mapping: the four non-thumb fingers are grouped behind one
// continuous grip signal; the thumb has its own channel.

#pragma once

#include <array>

namespace choice::teleop {

struct FingerRange {
  double open = 0.0;    // joint value at fully open
  double closed = 1.6;  // joint value at fully closed
};

struct HandConfig {
  FingerRange fingers;  // shared by the four grouped fingers
  FingerRange thumb;
};

struct HandCommand {
  double grip = 0.0;   // input after clamping to [0,1]
  double thumb = 0.0;
  // index 0..3: grouped fingers (all equal), index 4: thumb
  std::array<double, 5> finger_targets{};
  bool input_clamped = false;
};

HandCommand hand_from_inputs(double grip, double thumb, const HandConfig& config);

}  // namespace choice::teleop

// Deployment-time observation assembly for the low-level locomotion policy:
// one 49-entry frame per control tick, scaled and clipped exactly as the
// controller expects.
//
// Frame layout (49 entries):
//   [0]      sin(gait phase)
//   [1]      cos(gait phase)
//   [2]      move * v_x, then x1.2 if v_x >= 0 else x0.6
//   [3]      (-move * v_y) * 0.3
//   [4]      (-move * yaw_rate) * 0.3
//   [5..16]  leg joint positions minus default offsets (12)
//   [17..28] leg joint velocities * 0.1 (12)
//   [29..40] previous policy action (12)
//   [41..43] base angular velocity (3)
//   [44..46] base orientation, intrinsic roll-pitch-yaw (3)
//   [47]     constant bias 0.8
//   [48]     stand flag, 1 - move
// then every entry is clipped element-wise to +/-18.

#pragma once

#include <array>
#include <vector>

namespace choice::loco {

inline constexpr int kFrameDim = 49;
inline constexpr int kLegJoints = 12;

struct LocoCommand {
  double vx = 0.0;        // m/s, forward
  double vy = 0.0;        // m/s, lateral
  double yaw_rate = 0.0;  // rad/s
  int move = 0;           // 1 = walk, 0 = stand

  static LocoCommand stand() { return LocoCommand{}; }
};

struct RobotReadout {
  double gait_phase = 0.0;  // radians, advanced by the caller's gait clock
  std::vector<double> leg_positions;     // 12
  std::vector<double> leg_offsets;       // 12, default joint offsets
  std::vector<double> leg_velocities;    // 12
  std::vector<double> previous_action;   // 12
  std::vector<double> angular_velocity;  // 3
  std::vector<double> euler;             // 3: roll, pitch, yaw
};

using ObservationFrame49 = std::array<double, kFrameDim>;

// Throws std::invalid_argument on wrong vector lengths or a non-binary move
// flag.
ObservationFrame49 assemble_frame(const LocoCommand& cmd, const RobotReadout& readout);

}  // namespace choice::loco

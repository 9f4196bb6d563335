#include "choice/loco/frame.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace choice::loco {

namespace {

void require_len(const std::vector<double>& v, std::size_t n, const char* name) {
  if (v.size() != n) {
    throw std::invalid_argument(std::string(name) + " must have length " +
                                std::to_string(n) + ", got " + std::to_string(v.size()));
  }
}

}  // namespace

ObservationFrame49 assemble_frame(const LocoCommand& cmd, const RobotReadout& r) {
  require_len(r.leg_positions, kLegJoints, "leg_positions");
  require_len(r.leg_offsets, kLegJoints, "leg_offsets");
  require_len(r.leg_velocities, kLegJoints, "leg_velocities");
  require_len(r.previous_action, kLegJoints, "previous_action");
  require_len(r.angular_velocity, 3, "angular_velocity");
  require_len(r.euler, 3, "euler");
  if (cmd.move != 0 && cmd.move != 1) {
    throw std::invalid_argument("move flag must be 0 or 1");
  }

  ObservationFrame49 f{};
  double move = static_cast<double>(cmd.move);
  int i = 0;
  f[i++] = std::sin(r.gait_phase);
  f[i++] = std::cos(r.gait_phase);
  f[i++] = move * cmd.vx * (cmd.vx >= 0.0 ? 1.2 : 0.6);
  f[i++] = -move * cmd.vy * 0.3;
  f[i++] = -move * cmd.yaw_rate * 0.3;
  for (int j = 0; j < kLegJoints; ++j) {
    f[i++] = r.leg_positions[static_cast<std::size_t>(j)] -
             r.leg_offsets[static_cast<std::size_t>(j)];
  }
  for (int j = 0; j < kLegJoints; ++j) {
    f[i++] = r.leg_velocities[static_cast<std::size_t>(j)] * 0.1;
  }
  for (int j = 0; j < kLegJoints; ++j) {
    f[i++] = r.previous_action[static_cast<std::size_t>(j)];
  }
  for (int j = 0; j < 3; ++j) f[i++] = r.angular_velocity[static_cast<std::size_t>(j)];
  for (int j = 0; j < 3; ++j) f[i++] = r.euler[static_cast<std::size_t>(j)];
  f[i++] = 0.8;
  f[i++] = 1.0 - move;

  for (double& v : f) v = std::clamp(v, -18.0, 18.0);
  return f;
}

}  // namespace choice::loco

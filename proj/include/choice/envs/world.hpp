// Synthetic manipulation worlds with multimodal demonstrations by
// construction. Three tasks:
//
//   fork    — reach a goal behind a circular obstacle; two valid routes pass
//             on opposite sides, and their average goes straight through it.
//   phased  — reach / grasp / transfer / insert, with two valid approach
//             directions in both the reach and transfer phases.
//   wipe    — loco-manipulation: turn to look at an eraser, pick it up, walk
//             the base to a board zone, and sweep the target band clean.
//
// Environments are pure state machines: step() maps (state, action) to the
// next state with point-mass kinematics and per-step magnitude clipping.

#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "choice/numerics/rng.hpp"
#include "choice/policy/types.hpp"

namespace choice::envs {

using policy::Observation;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  double norm() const { return std::hypot(x, y); }
};

enum class TaskKind { kFork, kPhased, kWipe };

std::string task_name(TaskKind kind);
std::optional<TaskKind> parse_task(const std::string& name);

struct TaskSpec {
  TaskKind kind = TaskKind::kFork;
  int mode_count = 2;
  double mode_separation = 0.6;  // distance between alternative route waypoints
  int horizon_cap = 60;

  double step_cap = 0.08;   // max L2 position delta per step
  double goal_radius = 0.05;
  double grasp_radius = 0.06;
  double demo_noise_frac = 0.02;  // demonstration noise, fraction of step_cap
  double start_jitter = 0.02;
  Vec2 workspace_lo{-1.2, -1.2};
  Vec2 workspace_hi{1.4, 1.4};

  // fork geometry
  Vec2 start{0.0, 0.0};
  Vec2 goal{1.0, 0.0};
  Vec2 obstacle_center{0.5, 0.0};
  double obstacle_radius = 0.15;

  // phased geometry
  Vec2 object_start{0.5, 0.5};
  Vec2 slot{1.0, 0.5};
  double slot_radius = 0.06;

  // wipe geometry
  Vec2 eraser{0.2, -0.12};
  Vec2 board_zone{-0.6, 0.0};
  double board_radius = 0.12;
  double wipe_span = 0.3;        // required accumulated sweep length
  double wipe_reach = 0.2;       // hand must be this close to the board zone
  double base_vel_cap = 0.06;
  double yaw_rate_cap = 0.3;
  double arm_reach = 0.25;
  double look_tolerance = 0.15;  // heading-to-bearing error ending the look phase
  double stand_probability = 0.1;

  int obs_dim() const;
  int action_dim() const;
  int phase_count() const;
};

TaskSpec make_fork_task();
TaskSpec make_phased_task();
TaskSpec make_wipe_task();
TaskSpec make_task(TaskKind kind);

// Ordered phase names for a task; an episode's labels are non-decreasing.
const std::vector<std::string>& phase_names(TaskKind kind);

struct EnvState {
  Vec2 agent;    // hand position in the world frame
  Vec2 object;
  bool grasped = false;
  Vec2 base;     // wipe only
  double heading = 0.0;
  Vec2 arm;      // wipe only: hand offset from the base
  int phase = 0;
  int step_count = 0;
  bool collided = false;
  bool succeeded = false;
  double wipe_progress = 0.0;
  std::vector<bool> stage_done;  // one flag per phase, set when completed
};

// Jittered initial state; identical rng state gives an identical reset.
EnvState reset(const TaskSpec& task, num::Rng& rng);

Observation observe(const TaskSpec& task, const EnvState& state);

// Point-mass update; out-of-bounds motion is clipped, obstacle contact sets
// the collided flag. Step count always advances.
EnvState step(const TaskSpec& task, const EnvState& state, std::span<const double> action);

// True if the closed segment a-b intersects the disk (center, radius).
bool segment_hits_disk(const Vec2& a, const Vec2& b, const Vec2& center, double radius);

double wrap_angle(double a);

}  // namespace choice::envs

#include "choice/envs/demonstrator.hpp"

#include <functional>
#include <stdexcept>

namespace choice::envs {

namespace {

// Per-dim uniform noise within +/- demo_noise_frac * step_cap.
void add_noise(const TaskSpec& task, num::Rng& rng, double* v, int n) {
  double amp = task.demo_noise_frac * task.step_cap;
  for (int i = 0; i < n; ++i) v[i] += rng.uniform(-amp, amp);
}

Vec2 toward(const Vec2& from, const Vec2& target, double speed) {
  Vec2 d = target - from;
  double n = d.norm();
  if (n <= speed || n == 0.0) return d;
  return d * (speed / n);
}

std::vector<double> fork_action(const TaskSpec& task, const EnvState& s, int mode,
                                num::Rng& rng) {
  double side = mode == 0 ? 1.0 : -1.0;
  Vec2 waypoint{task.obstacle_center.x, side * task.mode_separation / 2.0};
  double speed = 0.9 * task.step_cap;
  // Head for the side waypoint until past the obstacle column, then the goal.
  Vec2 target = (s.agent.x < task.obstacle_center.x - 0.02) ? waypoint : task.goal;
  Vec2 d = toward(s.agent, target, speed);
  std::vector<double> a{d.x, d.y};
  add_noise(task, rng, a.data(), 2);
  return a;
}

std::vector<double> phased_action(const TaskSpec& task, const EnvState& s, int mode,
                                  num::Rng& rng) {
  double reach_side = (mode >> 1) == 0 ? 1.0 : -1.0;
  double transfer_side = (mode & 1) == 0 ? 1.0 : -1.0;
  Vec2 reach_wp{0.25, task.object_start.y + reach_side * task.mode_separation / 2.0};
  Vec2 transfer_wp{0.75, task.object_start.y + transfer_side * task.mode_separation / 2.0};
  double speed = 0.9 * task.step_cap;

  std::vector<double> a{0.0, 0.0, 0.0};
  if (!s.grasped) {
    if ((s.agent - s.object).norm() <= task.grasp_radius * 0.5) {
      a[2] = 1.0;  // close enough: grasp, no motion
    } else {
      Vec2 target = (s.agent.x >= reach_wp.x - 0.02) ? s.object : reach_wp;
      Vec2 d = toward(s.agent, target, speed);
      a[0] = d.x;
      a[1] = d.y;
    }
  } else {
    if ((s.object - task.slot).norm() <= task.slot_radius * 0.4) {
      a[2] = -1.0;  // release inside the slot
    } else {
      Vec2 target = (s.agent.x >= transfer_wp.x - 0.02) ? task.slot : transfer_wp;
      Vec2 d = toward(s.agent, target, speed);
      a[0] = d.x;
      a[1] = d.y;
    }
  }
  add_noise(task, rng, a.data(), 2);
  return a;
}

// The wipe controller keeps one bit of state: which end of the sweep band it
// is currently heading for.
struct WipeController {
  const TaskSpec& task;
  int mode;
  num::Rng& rng;
  bool sweep_to_far = false;  // false: near end (+x side), true: far end

  std::vector<double> act(const EnvState& s) {
    std::vector<double> a(7, 0.0);
    double speed = 0.9 * task.step_cap;
    double side = mode == 0 ? 1.0 : -1.0;

    if (s.phase == 0) {
      // turn toward the eraser; a locomotion command, so occasionally stand
      if (rng.uniform() < task.stand_probability) return a;
      double bearing = std::atan2(s.object.y - s.base.y, s.object.x - s.base.x);
      a[5] = std::clamp(wrap_angle(bearing - s.heading), -task.yaw_rate_cap,
                        task.yaw_rate_cap);
      a[6] = 1.0;
      return a;
    }
    if (!s.grasped) {
      // pickup while standing: hand approaches via the mode's side waypoint
      if ((s.agent - s.object).norm() <= task.grasp_radius * 0.5) {
        a[2] = 1.0;
        return a;
      }
      Vec2 approach_wp = s.object + Vec2{0.0, side * task.mode_separation / 2.0};
      Vec2 target = ((s.agent - s.object).norm() <= 0.09) ? s.object : approach_wp;
      Vec2 d = toward(s.agent, target, speed);
      a[0] = d.x;
      a[1] = d.y;
      add_noise(task, rng, a.data(), 2);
      return a;
    }
    if ((s.base - task.board_zone).norm() > task.board_radius * 0.8) {
      // walk to the board holding the eraser
      if (rng.uniform() < task.stand_probability) return a;
      Vec2 v_world = toward(s.base, task.board_zone, 0.9 * task.base_vel_cap);
      double c = std::cos(-s.heading), sn = std::sin(-s.heading);
      a[3] = c * v_world.x - sn * v_world.y;
      a[4] = sn * v_world.x + c * v_world.y;
      a[6] = 1.0;
      return a;
    }
    // sweep the hand back and forth across the board band
    Vec2 near_end = task.board_zone + Vec2{0.08, 0.0};
    Vec2 far_end = task.board_zone - Vec2{0.08, 0.0};
    Vec2 target = sweep_to_far ? far_end : near_end;
    if ((s.agent - target).norm() <= 0.02) {
      sweep_to_far = !sweep_to_far;
      target = sweep_to_far ? far_end : near_end;
    }
    Vec2 d = toward(s.agent, target, speed);
    a[0] = d.x;
    a[1] = d.y;
    add_noise(task, rng, a.data(), 2);
    return a;
  }
};

}  // namespace

EpisodeRecord scripted_demonstrator(const TaskSpec& task, int mode, num::Rng rng) {
  if (mode < 0 || mode >= task.mode_count) {
    throw std::invalid_argument("demonstrator: mode " + std::to_string(mode) +
                                " out of range (M=" + std::to_string(task.mode_count) + ")");
  }
  num::Rng reset_rng = rng.split(0);
  num::Rng noise_rng = rng.split(1);

  WipeController wipe{task, mode, noise_rng};
  std::function<std::vector<double>(const EnvState&)> act;
  switch (task.kind) {
    case TaskKind::kFork:
      act = [&](const EnvState& s) { return fork_action(task, s, mode, noise_rng); };
      break;
    case TaskKind::kPhased:
      act = [&](const EnvState& s) { return phased_action(task, s, mode, noise_rng); };
      break;
    case TaskKind::kWipe:
      act = [&](const EnvState& s) { return wipe.act(s); };
      break;
  }

  EpisodeRecord ep;
  ep.seed = rng.seed();
  ep.mode = mode;
  EnvState s = reset(task, reset_rng);
  while (!s.succeeded && s.step_count < task.horizon_cap) {
    std::vector<double> action = act(s);
    ep.steps.push_back(EpisodeStep{observe(task, s), action, s.phase});
    s = step(task, s, action);
    if (s.collided) break;
  }
  if (!s.succeeded) {
    throw std::runtime_error("demonstrator failed to complete task '" +
                             task_name(task.kind) + "' mode " + std::to_string(mode) +
                             " within " + std::to_string(task.horizon_cap) + " steps");
  }
  return ep;
}

}  // namespace choice::envs

#include "choice/envs/world.hpp"

#include <algorithm>
#include <stdexcept>

#include "choice/numerics/rng.hpp"

namespace choice::envs {

std::string task_name(TaskKind kind) {
  switch (kind) {
    case TaskKind::kFork: return "fork";
    case TaskKind::kPhased: return "phased";
    case TaskKind::kWipe: return "wipe";
  }
  return "?";
}

std::optional<TaskKind> parse_task(const std::string& name) {
  if (name == "fork") return TaskKind::kFork;
  if (name == "phased") return TaskKind::kPhased;
  if (name == "wipe") return TaskKind::kWipe;
  return std::nullopt;
}

int TaskSpec::obs_dim() const {
  switch (kind) {
    case TaskKind::kFork: return 2;    // agent
    case TaskKind::kPhased: return 5;  // agent, object, grasped
    case TaskKind::kWipe: return 11;   // base, heading (cos,sin), arm, grasped,
                                       // eraser-hand, board-base
  }
  return 0;
}

int TaskSpec::action_dim() const {
  switch (kind) {
    case TaskKind::kFork: return 2;    // dx, dy
    case TaskKind::kPhased: return 3;  // dx, dy, grasp
    case TaskKind::kWipe: return 7;    // arm dx, dy, grasp, vx, vy, yaw rate, move
  }
  return 0;
}

int TaskSpec::phase_count() const {
  switch (kind) {
    case TaskKind::kFork: return 3;
    case TaskKind::kPhased: return 4;
    case TaskKind::kWipe: return 4;
  }
  return 0;
}

const std::vector<std::string>& phase_names(TaskKind kind) {
  static const std::vector<std::string> fork = {"approach", "commit", "arrive"};
  static const std::vector<std::string> phased = {"reach", "grasp", "transfer", "insert"};
  static const std::vector<std::string> wipe = {"look", "pickup", "walk", "wipe"};
  switch (kind) {
    case TaskKind::kFork: return fork;
    case TaskKind::kPhased: return phased;
    case TaskKind::kWipe: return wipe;
  }
  return fork;
}

TaskSpec make_fork_task() {
  TaskSpec t;
  t.kind = TaskKind::kFork;
  t.mode_count = 2;
  t.mode_separation = 0.6;  // waypoints (0.5, +0.3) and (0.5, -0.3)
  t.horizon_cap = 60;
  return t;
}

TaskSpec make_phased_task() {
  TaskSpec t;
  t.kind = TaskKind::kPhased;
  t.mode_count = 4;  // {reach route} x {transfer route}
  t.mode_separation = 0.5;
  t.horizon_cap = 90;
  t.start = {0.0, 0.5};
  return t;
}

TaskSpec make_wipe_task() {
  TaskSpec t;
  t.kind = TaskKind::kWipe;
  t.mode_count = 2;  // pickup approach from above or below
  t.mode_separation = 0.16;
  t.horizon_cap = 160;
  t.start = {0.0, 0.0};
  t.eraser = {0.2, -0.12};  // within arm reach of the jittered start
  t.arm_reach = 0.3;
  return t;
}

TaskSpec make_task(TaskKind kind) {
  switch (kind) {
    case TaskKind::kFork: return make_fork_task();
    case TaskKind::kPhased: return make_phased_task();
    case TaskKind::kWipe: return make_wipe_task();
  }
  throw std::invalid_argument("unknown task kind");
}

double wrap_angle(double a) {
  while (a > 3.141592653589793) a -= 6.283185307179586;
  while (a < -3.141592653589793) a += 6.283185307179586;
  return a;
}

bool segment_hits_disk(const Vec2& a, const Vec2& b, const Vec2& center, double radius) {
  Vec2 d = b - a;
  Vec2 f = a - center;
  double dd = d.x * d.x + d.y * d.y;
  double t = 0.0;
  if (dd > 0.0) t = std::clamp(-(f.x * d.x + f.y * d.y) / dd, 0.0, 1.0);
  Vec2 closest{a.x + t * d.x, a.y + t * d.y};
  return (closest - center).norm() <= radius;
}

EnvState reset(const TaskSpec& task, num::Rng& rng) {
  EnvState s;
  s.agent = task.start;
  s.agent.x += rng.uniform(-task.start_jitter, task.start_jitter);
  s.agent.y += rng.uniform(-task.start_jitter, task.start_jitter);
  s.object = task.kind == TaskKind::kWipe ? task.eraser : task.object_start;
  s.base = s.agent;
  s.arm = {0.0, 0.0};
  if (task.kind == TaskKind::kWipe) {
    s.heading = rng.uniform(-0.1, 0.1);
    s.agent = s.base + s.arm;
  }
  s.stage_done.assign(static_cast<std::size_t>(task.phase_count()), false);
  return s;
}

Observation observe(const TaskSpec& task, const EnvState& s) {
  switch (task.kind) {
    case TaskKind::kFork:
      return {s.agent.x, s.agent.y};
    case TaskKind::kPhased:
      return {s.agent.x, s.agent.y, s.object.x, s.object.y, s.grasped ? 1.0 : 0.0};
    case TaskKind::kWipe:
      return {s.base.x,
              s.base.y,
              std::cos(s.heading),
              std::sin(s.heading),
              s.arm.x,
              s.arm.y,
              s.grasped ? 1.0 : 0.0,
              s.object.x - s.agent.x,
              s.object.y - s.agent.y,
              task.board_zone.x - s.base.x,
              task.board_zone.y - s.base.y};
  }
  return {};
}

namespace {

Vec2 clip_norm(Vec2 v, double cap) {
  double n = v.norm();
  if (n > cap && n > 0.0) v = v * (cap / n);
  return v;
}

Vec2 clamp_workspace(const TaskSpec& task, Vec2 p) {
  p.x = std::clamp(p.x, task.workspace_lo.x, task.workspace_hi.x);
  p.y = std::clamp(p.y, task.workspace_lo.y, task.workspace_hi.y);
  return p;
}

void advance_phase(EnvState& s, int target) {
  while (s.phase < target) {
    s.stage_done[static_cast<std::size_t>(s.phase)] = true;
    ++s.phase;
  }
}

void apply_grasp_signal(const TaskSpec& task, EnvState& s, double signal) {
  if (!s.grasped && signal > 0.5 && (s.agent - s.object).norm() <= task.grasp_radius) {
    s.grasped = true;
  } else if (s.grasped && signal < -0.5) {
    s.grasped = false;
  }
  if (s.grasped) s.object = s.agent;
}

void step_fork(const TaskSpec& task, EnvState& s, std::span<const double> a) {
  Vec2 delta = clip_norm({a[0], a[1]}, task.step_cap);
  Vec2 next = clamp_workspace(task, s.agent + delta);
  if (segment_hits_disk(s.agent, next, task.obstacle_center, task.obstacle_radius)) {
    s.collided = true;
  }
  s.agent = next;
  if (s.agent.x >= task.obstacle_center.x - task.obstacle_radius) {
    advance_phase(s, 1);
  }
  if ((s.agent - task.goal).norm() <= task.goal_radius) {
    advance_phase(s, 2);
    s.stage_done.back() = true;
    if (!s.collided) s.succeeded = true;
  }
}

void step_phased(const TaskSpec& task, EnvState& s, std::span<const double> a) {
  Vec2 delta = clip_norm({a[0], a[1]}, task.step_cap);
  bool was_grasped = s.grasped;
  s.agent = clamp_workspace(task, s.agent + delta);
  if (s.grasped) s.object = s.agent;
  apply_grasp_signal(task, s, a[2]);

  if ((s.agent - s.object).norm() <= task.grasp_radius) advance_phase(s, 1);
  if (s.grasped) advance_phase(s, 2);
  if (s.grasped && (s.object - task.slot).norm() <= task.slot_radius) advance_phase(s, 3);
  if (was_grasped && !s.grasped) {
    // released: success only inside the slot
    if ((s.object - task.slot).norm() <= task.slot_radius) {
      s.stage_done.back() = true;
      s.succeeded = true;
    }
  }
}

void step_wipe(const TaskSpec& task, EnvState& s, std::span<const double> a) {
  Vec2 arm_delta = clip_norm({a[0], a[1]}, task.step_cap);
  bool move = a[6] > 0.5;
  if (move) {
    Vec2 v = clip_norm({a[3], a[4]}, task.base_vel_cap);
    double c = std::cos(s.heading), sn = std::sin(s.heading);
    s.base = clamp_workspace(task, {s.base.x + c * v.x - sn * v.y, s.base.y + sn * v.x + c * v.y});
    s.heading = wrap_angle(s.heading + std::clamp(a[5], -task.yaw_rate_cap, task.yaw_rate_cap));
  }
  s.arm = clip_norm(s.arm + arm_delta, task.arm_reach);
  Vec2 prev_hand = s.agent;
  s.agent = s.base + s.arm;
  if (s.grasped) s.object = s.agent;
  apply_grasp_signal(task, s, a[2]);

  double bearing = std::atan2(s.object.y - s.base.y, s.object.x - s.base.x);
  if (s.phase == 0 && std::abs(wrap_angle(s.heading - bearing)) <= task.look_tolerance) {
    advance_phase(s, 1);
  }
  if (s.phase >= 1 && s.grasped) advance_phase(s, 2);
  if (s.phase >= 2 && s.grasped && (s.base - task.board_zone).norm() <= task.board_radius) {
    advance_phase(s, 3);
  }
  if (s.phase == 3 && s.grasped && (s.agent - task.board_zone).norm() <= task.wipe_reach) {
    s.wipe_progress += (s.agent - prev_hand).norm();
    if (s.wipe_progress >= task.wipe_span) {
      s.stage_done.back() = true;
      s.succeeded = true;
    }
  }
}

}  // namespace

EnvState step(const TaskSpec& task, const EnvState& state, std::span<const double> action) {
  if (static_cast<int>(action.size()) != task.action_dim()) {
    throw std::invalid_argument("step: action dim " + std::to_string(action.size()) +
                                " does not match task dim " +
                                std::to_string(task.action_dim()));
  }
  EnvState s = state;
  switch (task.kind) {
    case TaskKind::kFork: step_fork(task, s, action); break;
    case TaskKind::kPhased: step_phased(task, s, action); break;
    case TaskKind::kWipe: step_wipe(task, s, action); break;
  }
  ++s.step_count;
  return s;
}

}  // namespace choice::envs

// Closed-loop policy evaluation: execute the first action of each inferred
// chunk, re-planning every step, and record phases, selected proposal heads,
// and per-stage completion.

#pragma once

#include <functional>
#include <string>

#include "choice/envs/world.hpp"
#include "choice/numerics/rng.hpp"

namespace choice::envs {

struct StepDecision {
  std::vector<double> action;
  int head = -1;  // selected proposal index, -1 when not applicable
};

using PolicyFn = std::function<StepDecision(const Observation&)>;

struct RolloutResult {
  bool success = false;
  std::string fail_reason;  // empty, "timeout", or "collision"
  int steps = 0;
  std::vector<int> head_per_step;
  std::vector<int> phase_per_step;
  std::vector<bool> stage_done;
  std::vector<Vec2> trajectory;  // agent positions, initial state included
};

// rng drives the jittered reset only; the policy supplies its own randomness
// if it has any. max_steps <= 0 means the task's horizon cap.
RolloutResult rollout(const TaskSpec& task, const PolicyFn& policy, num::Rng& rng,
                      int max_steps = 0);

}  // namespace choice::envs

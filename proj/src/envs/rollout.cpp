#include "choice/envs/rollout.hpp"

namespace choice::envs {

RolloutResult rollout(const TaskSpec& task, const PolicyFn& policy, num::Rng& rng,
                      int max_steps) {
  if (max_steps <= 0) max_steps = task.horizon_cap;
  RolloutResult res;
  EnvState s = reset(task, rng);
  res.trajectory.push_back(s.agent);
  while (s.step_count < max_steps) {
    StepDecision d = policy(observe(task, s));
    res.head_per_step.push_back(d.head);
    res.phase_per_step.push_back(s.phase);
    s = step(task, s, d.action);
    res.trajectory.push_back(s.agent);
    if (s.succeeded) {
      res.success = true;
      break;
    }
    if (s.collided) {
      res.fail_reason = "collision";
      break;
    }
  }
  if (!res.success && res.fail_reason.empty()) res.fail_reason = "timeout";
  res.steps = s.step_count;
  res.stage_done = s.stage_done;
  return res;
}

}  // namespace choice::envs

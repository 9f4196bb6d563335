// Evaluation metrics, rollout-log persistence, and report writers. Rollout
// logs carry everything needed to regenerate a report without re-running the
// policy.

#pragma once

#include <string>
#include <vector>

#include "choice/envs/rollout.hpp"
#include "choice/harness/config.hpp"

namespace choice::harness {

inline constexpr const char* kRolloutSchema = "choice-rollouts v1";

struct RolloutLog {
  std::string task;
  std::string algo;
  std::string selection;
  int k = 0;
  std::string config_hash;
  std::vector<envs::RolloutResult> rollouts;
  // score calibration pairs on held-out states (choice models only)
  std::vector<double> calib_scores;
  std::vector<double> calib_losses;
};

void save_rollout_log(const RolloutLog& log, const std::string& path);
RolloutLog load_rollout_log(const std::string& path);

struct MetricsReport {
  std::string task;
  std::string algo;
  std::string selection;
  int trials = 0;
  int successes = 0;
  std::vector<std::string> stage_names;
  std::vector<int> stage_successes;
  // head_hist[phase][head]; sums to the evaluated step count per phase
  std::vector<std::vector<int>> head_hist;
  double score_spearman = 0.0;
  bool has_spearman = false;
};

MetricsReport build_report(const RolloutLog& log);

// <base>.csv (per-stage successes) and <base>.heads.csv (per-phase head
// histogram) plus <base>.summary.txt. All deterministic for fixed inputs.
void write_report_files(const MetricsReport& report, const std::string& base_path);

// Spearman rank correlation with tie-averaged ranks.
double spearman(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace choice::harness

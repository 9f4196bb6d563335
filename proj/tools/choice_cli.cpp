// Command-line front end: data generation, training, evaluation, selection
// ablations, latency benchmarking, and report regeneration.
//
//   choice generate-data --task fork --episodes 100 --seed 7 --out demos.txt
//   choice train --algo choice --data demos.txt --k 5 --out model.json
//   choice eval --checkpoint model.json --episodes 100 --out eval/fork
//   choice ablate --checkpoint model.json --out ablation/fork
//   choice bench-latency --checkpoint model.json --checkpoint dp.json --out lat
//   choice report --data eval/fork.rollouts.json --out eval/fork_again
//
// Every flag can also come from a key=value config file via --config; flags
// override the file.

#include <CLI11.hpp>

#include "choice/harness/commands.hpp"

namespace {

void add_common_options(CLI::App* cmd, choice::harness::RunConfig& config) {
  cmd->set_config("--config", "", "flat key=value config file; flags override it");
  cmd->add_option("--task", config.task, "task name: fork | phased | wipe");
  cmd->add_option("--algo", config.algo, "algorithm: choice | bc | denoiser");
  cmd->add_option("--k", config.k, "number of action proposals");
  cmd->add_option("--horizon", config.horizon, "action chunk horizon T");
  cmd->add_option("--epochs", config.epochs, "training epochs");
  cmd->add_option("--batch", config.batch, "training batch size");
  cmd->add_option("--seed", config.seed, "seed for this command");
  cmd->add_option("--episodes", config.episodes, "episode / rollout count");
  cmd->add_option("--selection", config.selection,
                  "selection strategy: score | random | mean | single:<k>");
  cmd->add_option("--out", config.out, "output path (base name for reports)");
  cmd->add_option("--checkpoint", config.checkpoints, "model checkpoint (repeatable)");
  cmd->add_option("--data", config.data, "input dataset or rollout log");
}

void record_explicit(const CLI::App* cmd, choice::harness::RunConfig& config) {
  for (const char* key : {"task", "algo", "k", "horizon", "epochs", "batch", "seed",
                          "episodes", "selection", "out", "checkpoint", "data"}) {
    if (cmd->count(std::string("--") + key) > 0) config.explicit_keys.insert(key);
  }
  if (!config.checkpoints.empty()) {
    config.checkpoint = config.checkpoints.front();
    if (config.checkpoints.size() == 1) config.checkpoints.clear();
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"choice policy experiments"};
  app.require_subcommand(1);

  choice::harness::RunConfig config;
  const char* names[] = {"generate-data", "train", "eval", "ablate", "bench-latency",
                         "report"};
  const char* descs[] = {"generate scripted demonstrations",
                         "train a policy on a dataset",
                         "run evaluation rollouts and write reports",
                         "compare selection strategies",
                         "measure inference latency",
                         "regenerate reports from a rollout log"};
  for (int i = 0; i < 6; ++i) {
    CLI::App* cmd = app.add_subcommand(names[i], descs[i]);
    add_common_options(cmd, config);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : choice::harness::kExitConfigError;
  }

  CLI::App* cmd = app.get_subcommands().front();
  record_explicit(cmd, config);
  return choice::harness::run_command(cmd->get_name(), config);
}

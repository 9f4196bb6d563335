#include "choice/harness/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>

#include "choice/baselines/selection.hpp"
#include "choice/common/format.hpp"
#include "choice/envs/dataset.hpp"
#include "choice/envs/rollout.hpp"
#include "choice/harness/metrics.hpp"
#include "choice/harness/model_io.hpp"

namespace choice::harness {

namespace {

constexpr int kLatencyCalls = 1000;
constexpr int kCalibEpisodes = 40;
constexpr std::uint64_t kHeldoutSeedSalt = 0x5EEDull;

envs::TaskSpec task_from_name(const std::string& name) {
  std::optional<envs::TaskKind> kind = envs::parse_task(name);
  if (!kind) throw ConfigError("unknown task '" + name + "' (fork | phased | wipe)");
  return envs::make_task(*kind);
}

void require_out(const RunConfig& config) {
  if (config.out.empty()) throw ConfigError("--out is required");
}

// Task recorded in an artifact wins; an explicit conflicting --task is
// refused rather than silently overridden.
std::string resolve_task(const RunConfig& config, const std::string& artifact_task,
                         const std::string& artifact_name) {
  if (config.is_set("task") && !artifact_task.empty() && config.task != artifact_task) {
    throw ConfigError("--task " + config.task + " conflicts with " + artifact_name +
                      " task '" + artifact_task + "'");
  }
  return artifact_task.empty() ? config.task : artifact_task;
}

policy::ModelConfig model_config_for(const RunConfig& config, const envs::TaskSpec& task) {
  policy::ModelConfig mc;
  mc.k = config.k;
  mc.horizon = config.horizon;
  mc.action_dim = task.action_dim();
  mc.obs_dim = task.obs_dim();
  return mc;
}

struct EvalPolicy {
  envs::PolicyFn fn;
  std::string algo;
  int k = 0;
};

// Wraps a checkpointed model as a stepping policy; rngs live in the returned
// closures.
EvalPolicy make_policy(const Checkpoint& ckpt, const baselines::SelectionStrategy& strategy,
                       std::uint64_t seed) {
  EvalPolicy p;
  switch (ckpt.kind) {
    case ModelKind::kChoice: {
      const policy::ChoicePolicyModel& m = ckpt.choice.value();
      if (strategy.kind == baselines::SelectionKind::kSingle &&
          (strategy.single_index < 0 || strategy.single_index >= m.config.k)) {
        throw ConfigError("selection " + strategy.name() + " out of range for K=" +
                          std::to_string(m.config.k));
      }
      auto rng = std::make_shared<num::Rng>(num::Rng(seed).split(17));
      p.fn = [&m, strategy, rng](const policy::Observation& obs) {
        policy::ProposalSet set = policy::propose(m, obs);
        baselines::Selection sel = baselines::select_with_strategy(set, strategy, *rng);
        return envs::StepDecision{sel.chunk.first_action(), sel.index};
      };
      p.algo = "choice";
      p.k = m.config.k;
      break;
    }
    case ModelKind::kBc: {
      const baselines::BcModel& m = ckpt.bc.value();
      p.fn = [&m](const policy::Observation& obs) {
        return envs::StepDecision{baselines::bc_infer(m, obs).first_action(), -1};
      };
      p.algo = "bc";
      p.k = 1;
      break;
    }
    case ModelKind::kDenoiser: {
      const baselines::DenoiserModel& m = ckpt.denoiser.value();
      auto rng = std::make_shared<num::Rng>(num::Rng(seed).split(23));
      p.fn = [&m, rng](const policy::Observation& obs) {
        return envs::StepDecision{baselines::denoiser_sample(m, obs, *rng).first_action(), -1};
      };
      p.algo = "denoiser";
      p.k = 1;
      break;
    }
  }
  return p;
}

std::vector<envs::RolloutResult> run_rollouts(const envs::TaskSpec& task,
                                              const envs::PolicyFn& fn, int episodes,
                                              std::uint64_t seed) {
  std::vector<envs::RolloutResult> out;
  out.reserve(static_cast<std::size_t>(episodes));
  num::Rng root(seed);
  for (int i = 0; i < episodes; ++i) {
    num::Rng ep_rng = root.split(1000 + static_cast<std::uint64_t>(i));
    out.push_back(envs::rollout(task, fn, ep_rng));
  }
  return out;
}

// Score calibration pairs on held-out demonstrations, in the model's
// normalized space (the space the scores are trained in).
void collect_calibration(const policy::ChoicePolicyModel& model, const envs::TaskSpec& task,
                         std::uint64_t seed, RolloutLog& log) {
  std::vector<envs::EpisodeRecord> heldout =
      envs::generate_episodes(task, kCalibEpisodes, seed ^ kHeldoutSeedSalt);
  policy::ChunkedDataset chunked = envs::make_chunked(heldout, model.config.horizon);
  for (const policy::ChunkedSample& smp : chunked.samples) {
    policy::ProposalSet set = policy::propose(model, smp.obs);
    policy::ActionChunk ngt = model.stats.normalize_chunk(smp.target);
    for (int k = 0; k < set.k(); ++k) {
      policy::ActionChunk nprop =
          model.stats.normalize_chunk(set.proposals[static_cast<std::size_t>(k)]);
      log.calib_scores.push_back(set.scores[static_cast<std::size_t>(k)]);
      log.calib_losses.push_back(policy::chunk_mse(nprop, ngt));
    }
  }
}

double percentile(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  double idx = p * (static_cast<double>(v.size()) - 1.0);
  std::size_t lo = static_cast<std::size_t>(idx);
  std::size_t hi = std::min(lo + 1, v.size() - 1);
  double frac = idx - static_cast<double>(lo);
  return v[lo] * (1.0 - frac) + v[hi] * frac;
}

struct LatencyStats {
  double mean_us = 0.0, p50_us = 0.0, p90_us = 0.0, p99_us = 0.0;
};

LatencyStats time_policy(const std::function<void()>& call, int calls) {
  for (int i = 0; i < 10; ++i) call();  // warmup
  std::vector<double> us;
  us.reserve(static_cast<std::size_t>(calls));
  for (int i = 0; i < calls; ++i) {
    auto t0 = std::chrono::steady_clock::now();
    call();
    auto t1 = std::chrono::steady_clock::now();
    us.push_back(std::chrono::duration<double, std::micro>(t1 - t0).count());
  }
  LatencyStats st;
  for (double v : us) st.mean_us += v;
  st.mean_us /= static_cast<double>(us.size());
  st.p50_us = percentile(us, 0.5);
  st.p90_us = percentile(us, 0.9);
  st.p99_us = percentile(us, 0.99);
  return st;
}

}  // namespace

void cmd_generate_data(const RunConfig& config) {
  require_out(config);
  if (config.episodes < 1) throw ConfigError("--episodes must be >= 1");
  envs::TaskSpec task = task_from_name(config.task);
  std::vector<envs::EpisodeRecord> episodes =
      envs::generate_episodes(task, config.episodes, config.seed);
  envs::write_dataset(config.out, task, episodes, config.seed, config.config_hash());
  std::cout << "wrote " << episodes.size() << " episodes for task '" << config.task
            << "' to " << config.out << "\n";
}

void cmd_train(const RunConfig& config) {
  require_out(config);
  if (config.data.empty()) throw ConfigError("--data is required for train");
  envs::Dataset ds = envs::read_dataset(config.data);
  std::string task_name = resolve_task(config, ds.header.task, "dataset");
  envs::TaskSpec task = task_from_name(task_name);
  policy::ChunkedDataset chunked = envs::make_chunked(ds.episodes, config.horizon);

  Checkpoint ckpt;
  ckpt.task = task_name;
  ckpt.config_hash = config.config_hash();
  std::ofstream loss_csv(config.out + ".loss.csv");
  if (!loss_csv) throw DataError("cannot open loss log for write: " + config.out + ".loss.csv");

  if (config.algo == "choice") {
    policy::ChoicePolicyModel model =
        policy::make_choice_model(model_config_for(config, task), num::Rng(config.seed));
    policy::FitConfig fc;
    fc.epochs = config.epochs;
    fc.batch_size = config.batch;
    fc.seed = config.seed;
    policy::FitResult res = policy::fit(model, chunked, fc);
    loss_csv << "epoch,total,action,score\n";
    for (std::size_t e = 0; e < res.epoch_total.size(); ++e) {
      loss_csv << e << ',' << fmt_real(res.epoch_total[e]) << ','
               << fmt_real(res.epoch_action[e]) << ',' << fmt_real(res.epoch_score[e]) << "\n";
    }
    ckpt.kind = ModelKind::kChoice;
    ckpt.choice = std::move(model);
  } else if (config.algo == "bc") {
    baselines::BcModel model =
        baselines::make_bc_model(model_config_for(config, task), num::Rng(config.seed));
    policy::FitConfig fc;
    fc.epochs = config.epochs;
    fc.batch_size = config.batch;
    fc.seed = config.seed;
    policy::FitResult res = baselines::bc_fit(model, chunked, fc);
    loss_csv << "epoch,loss\n";
    for (std::size_t e = 0; e < res.epoch_total.size(); ++e) {
      loss_csv << e << ',' << fmt_real(res.epoch_total[e]) << "\n";
    }
    ckpt.kind = ModelKind::kBc;
    ckpt.bc = std::move(model);
  } else if (config.algo == "denoiser") {
    baselines::DenoiserConfig dc;
    dc.horizon = config.horizon;
    dc.action_dim = task.action_dim();
    dc.obs_dim = task.obs_dim();
    baselines::DenoiserModel model = baselines::make_denoiser(dc, num::Rng(config.seed));
    baselines::DenoiserFitConfig fc;
    fc.epochs = config.epochs;
    fc.batch_size = config.batch;
    fc.seed = config.seed;
    std::vector<double> losses = baselines::denoiser_fit(model, chunked, fc);
    loss_csv << "epoch,loss\n";
    for (std::size_t e = 0; e < losses.size(); ++e) {
      loss_csv << e << ',' << fmt_real(losses[e]) << "\n";
    }
    ckpt.kind = ModelKind::kDenoiser;
    ckpt.denoiser = std::move(model);
  } else {
    throw ConfigError("unknown algo '" + config.algo + "' (choice | bc | denoiser)");
  }

  save_checkpoint(ckpt, config.out);
  std::cout << "trained " << config.algo << " on " << chunked.size() << " samples, wrote "
            << config.out << "\n";
}

void cmd_eval(const RunConfig& config) {
  require_out(config);
  if (config.checkpoint.empty()) throw ConfigError("--checkpoint is required for eval");
  Checkpoint ckpt = load_checkpoint(config.checkpoint);
  std::string task_name = resolve_task(config, ckpt.task, "checkpoint");
  envs::TaskSpec task = task_from_name(task_name);
  if (config.is_set("k") && ckpt.kind == ModelKind::kChoice &&
      config.k != ckpt.choice->config.k) {
    throw ConfigError("--k " + std::to_string(config.k) + " conflicts with checkpoint K=" +
                      std::to_string(ckpt.choice->config.k));
  }

  std::optional<baselines::SelectionStrategy> strategy =
      baselines::parse_selection(config.selection);
  if (!strategy) throw ConfigError("unknown selection strategy '" + config.selection + "'");

  EvalPolicy pol = make_policy(ckpt, *strategy, config.seed);
  RolloutLog log;
  log.task = task_name;
  log.algo = pol.algo;
  log.selection = ckpt.kind == ModelKind::kChoice ? strategy->name() : "";
  log.k = pol.k;
  log.config_hash = config.config_hash();
  log.rollouts = run_rollouts(task, pol.fn, config.episodes, config.seed);
  if (ckpt.kind == ModelKind::kChoice) {
    collect_calibration(ckpt.choice.value(), task, config.seed, log);
  }
  save_rollout_log(log, config.out + ".rollouts.json");
  MetricsReport rep = build_report(log);
  write_report_files(rep, config.out);

  // informational only; kept out of the deterministic report files
  {
    policy::Observation obs = envs::observe(task, [&] {
      num::Rng r(config.seed);
      return envs::reset(task, r);
    }());
    LatencyStats st = time_policy([&]() { pol.fn(obs); }, 200);
    std::ofstream lat(config.out + ".latency.txt");
    lat << "infer mean_us " << st.mean_us << " p50_us " << st.p50_us << " p90_us "
        << st.p90_us << "\n";
  }
  std::cout << "eval " << pol.algo << " on " << task_name << ": " << rep.successes << " / "
            << rep.trials << " successes\n";
}

void cmd_ablate(const RunConfig& config) {
  require_out(config);
  if (config.checkpoint.empty()) throw ConfigError("--checkpoint is required for ablate");
  Checkpoint ckpt = load_checkpoint(config.checkpoint);
  if (ckpt.kind != ModelKind::kChoice) {
    throw ConfigError("ablate needs a choice checkpoint, got " + model_kind_name(ckpt.kind));
  }
  std::string task_name = resolve_task(config, ckpt.task, "checkpoint");
  envs::TaskSpec task = task_from_name(task_name);
  int k = ckpt.choice->config.k;

  std::vector<baselines::SelectionStrategy> strategies = {
      baselines::SelectionStrategy::score(), baselines::SelectionStrategy::random(),
      baselines::SelectionStrategy::mean()};
  for (int i = 0; i < k; ++i) strategies.push_back(baselines::SelectionStrategy::single(i));

  std::ofstream csv(config.out + ".csv");
  if (!csv) throw DataError("cannot open ablation csv for write: " + config.out + ".csv");
  const std::vector<std::string>& stages = envs::phase_names(*envs::parse_task(task_name));
  csv << "strategy";
  for (const std::string& s : stages) csv << ',' << s;
  csv << ",overall,trials\n";

  for (const baselines::SelectionStrategy& strategy : strategies) {
    EvalPolicy pol = make_policy(ckpt, strategy, config.seed);
    // same per-episode reset streams for every strategy: paired comparison
    std::vector<envs::RolloutResult> rollouts =
        run_rollouts(task, pol.fn, config.episodes, config.seed);
    std::vector<int> stage_succ(stages.size(), 0);
    int succ = 0;
    for (const envs::RolloutResult& r : rollouts) {
      if (r.success) ++succ;
      for (std::size_t s = 0; s < r.stage_done.size() && s < stages.size(); ++s) {
        if (r.stage_done[s]) ++stage_succ[s];
      }
    }
    csv << strategy.name();
    for (int v : stage_succ) csv << ',' << v;
    csv << ',' << succ << ',' << config.episodes << "\n";
    std::cout << "ablate " << strategy.name() << ": " << succ << " / " << config.episodes
              << "\n";
  }
}

void cmd_bench_latency(const RunConfig& config) {
  require_out(config);
  std::vector<std::string> paths = config.checkpoints;
  if (!config.checkpoint.empty()) paths.push_back(config.checkpoint);
  if (paths.empty()) throw ConfigError("bench-latency needs at least one --checkpoint");

  std::ofstream csv(config.out + ".csv");
  if (!csv) throw DataError("cannot open latency csv for write: " + config.out + ".csv");
  csv << "checkpoint,kind,calls,mean_us,p50_us,p90_us,p99_us\n";
  for (const std::string& path : paths) {
    Checkpoint ckpt = load_checkpoint(path);
    envs::TaskSpec task = task_from_name(ckpt.task);
    EvalPolicy pol = make_policy(ckpt, baselines::SelectionStrategy::score(), config.seed);
    num::Rng r(config.seed);
    policy::Observation obs = envs::observe(task, envs::reset(task, r));
    LatencyStats st = time_policy([&]() { pol.fn(obs); }, kLatencyCalls);
    csv << path << ',' << model_kind_name(ckpt.kind) << ',' << kLatencyCalls << ','
        << st.mean_us << ',' << st.p50_us << ',' << st.p90_us << ',' << st.p99_us << "\n";
    std::cout << "latency " << model_kind_name(ckpt.kind) << ": mean " << st.mean_us
              << " us over " << kLatencyCalls << " calls\n";
  }
}

void cmd_report(const RunConfig& config) {
  require_out(config);
  if (config.data.empty()) throw ConfigError("--data (rollout log) is required for report");
  RolloutLog log = load_rollout_log(config.data);
  MetricsReport rep = build_report(log);
  write_report_files(rep, config.out);
  std::cout << "report regenerated from " << config.data << ": " << rep.successes << " / "
            << rep.trials << " successes\n";
}

int run_command(const std::string& name, const RunConfig& config) {
  try {
    if (name == "generate-data") cmd_generate_data(config);
    else if (name == "train") cmd_train(config);
    else if (name == "eval") cmd_eval(config);
    else if (name == "ablate") cmd_ablate(config);
    else if (name == "bench-latency") cmd_bench_latency(config);
    else if (name == "report") cmd_report(config);
    else throw ConfigError("unknown command '" + name + "'");
    return kExitOk;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const num::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumericalError;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitDataError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitDataError;
  }
}

}  // namespace choice::harness

#include "choice/harness/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <json.hpp>

namespace choice::harness {

using nlohmann::json;

void save_rollout_log(const RolloutLog& log, const std::string& path) {
  json j;
  j["schema"] = kRolloutSchema;
  j["task"] = log.task;
  j["algo"] = log.algo;
  j["selection"] = log.selection;
  j["k"] = log.k;
  j["config_hash"] = log.config_hash;
  json eps = json::array();
  for (const envs::RolloutResult& r : log.rollouts) {
    json e;
    e["success"] = r.success;
    e["fail_reason"] = r.fail_reason;
    e["steps"] = r.steps;
    e["stages"] = r.stage_done;
    e["phases"] = r.phase_per_step;
    e["heads"] = r.head_per_step;
    eps.push_back(std::move(e));
  }
  j["rollouts"] = std::move(eps);
  j["calib_scores"] = log.calib_scores;
  j["calib_losses"] = log.calib_losses;
  std::ofstream out(path);
  if (!out) throw DataError("cannot open rollout log for write: " + path);
  out << j.dump(2) << "\n";
}

RolloutLog load_rollout_log(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open rollout log: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw DataError("malformed rollout log " + path + ": " + e.what());
  }
  if (j.value("schema", "") != kRolloutSchema) {
    throw DataError("unrecognized rollout log schema in " + path);
  }
  RolloutLog log;
  log.task = j.at("task").get<std::string>();
  log.algo = j.at("algo").get<std::string>();
  log.selection = j.value("selection", "");
  log.k = j.at("k").get<int>();
  log.config_hash = j.value("config_hash", "");
  for (const json& e : j.at("rollouts")) {
    envs::RolloutResult r;
    r.success = e.at("success").get<bool>();
    r.fail_reason = e.at("fail_reason").get<std::string>();
    r.steps = e.at("steps").get<int>();
    r.stage_done = e.at("stages").get<std::vector<bool>>();
    r.phase_per_step = e.at("phases").get<std::vector<int>>();
    r.head_per_step = e.at("heads").get<std::vector<int>>();
    log.rollouts.push_back(std::move(r));
  }
  log.calib_scores = j.value("calib_scores", std::vector<double>{});
  log.calib_losses = j.value("calib_losses", std::vector<double>{});
  return log;
}

namespace {

std::vector<double> tie_averaged_ranks(const std::vector<double>& v) {
  std::size_t n = v.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
    double mean_rank = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t t = i; t <= j; ++t) ranks[idx[t]] = mean_rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double spearman(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2) {
    throw std::invalid_argument("spearman: need two equal-length vectors of size >= 2");
  }
  std::vector<double> ra = tie_averaged_ranks(a);
  std::vector<double> rb = tie_averaged_ranks(b);
  double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / static_cast<double>(ra.size());
  double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / static_cast<double>(rb.size());
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    double da = ra[i] - ma;
    double db = rb[i] - mb;
    cov += da * db;
    va += da * da;
    vb += db * db;
  }
  if (va == 0.0 || vb == 0.0) return 0.0;
  return cov / std::sqrt(va * vb);
}

MetricsReport build_report(const RolloutLog& log) {
  MetricsReport rep;
  rep.task = log.task;
  rep.algo = log.algo;
  rep.selection = log.selection;
  rep.trials = static_cast<int>(log.rollouts.size());

  std::optional<envs::TaskKind> kind = envs::parse_task(log.task);
  if (!kind) throw DataError("rollout log names unknown task '" + log.task + "'");
  rep.stage_names = envs::phase_names(*kind);
  rep.stage_successes.assign(rep.stage_names.size(), 0);

  int max_head = log.k > 0 ? log.k : 1;
  rep.head_hist.assign(rep.stage_names.size(), std::vector<int>(static_cast<std::size_t>(max_head), 0));

  for (const envs::RolloutResult& r : log.rollouts) {
    if (r.success) ++rep.successes;
    for (std::size_t s = 0; s < r.stage_done.size() && s < rep.stage_names.size(); ++s) {
      if (r.stage_done[s]) ++rep.stage_successes[s];
    }
    for (std::size_t t = 0; t < r.head_per_step.size(); ++t) {
      int head = r.head_per_step[t];
      int phase = r.phase_per_step[t];
      if (head >= 0 && head < max_head && phase >= 0 &&
          phase < static_cast<int>(rep.stage_names.size())) {
        ++rep.head_hist[static_cast<std::size_t>(phase)][static_cast<std::size_t>(head)];
      }
    }
  }
  if (log.calib_scores.size() >= 2 && log.calib_scores.size() == log.calib_losses.size()) {
    rep.score_spearman = spearman(log.calib_scores, log.calib_losses);
    rep.has_spearman = true;
  }
  return rep;
}

void write_report_files(const MetricsReport& rep, const std::string& base) {
  {
    std::ofstream csv(base + ".csv");
    if (!csv) throw DataError("cannot open report csv for write: " + base + ".csv");
    csv << "stage,successes,trials\n";
    for (std::size_t s = 0; s < rep.stage_names.size(); ++s) {
      csv << rep.stage_names[s] << ',' << rep.stage_successes[s] << ',' << rep.trials << "\n";
    }
    csv << "overall," << rep.successes << ',' << rep.trials << "\n";
  }
  {
    std::ofstream csv(base + ".heads.csv");
    if (!csv) throw DataError("cannot open head csv for write: " + base + ".heads.csv");
    csv << "phase";
    std::size_t heads = rep.head_hist.empty() ? 0 : rep.head_hist.front().size();
    for (std::size_t h = 0; h < heads; ++h) csv << ",head" << h;
    csv << "\n";
    for (std::size_t p = 0; p < rep.head_hist.size(); ++p) {
      csv << rep.stage_names[p];
      for (int c : rep.head_hist[p]) csv << ',' << c;
      csv << "\n";
    }
  }
  {
    std::ofstream txt(base + ".summary.txt");
    if (!txt) throw DataError("cannot open summary for write: " + base + ".summary.txt");
    txt << "task: " << rep.task << "\n";
    txt << "algo: " << rep.algo;
    if (!rep.selection.empty()) txt << " (selection " << rep.selection << ")";
    txt << "\n";
    txt << "overall: " << rep.successes << " / " << rep.trials << "\n";
    for (std::size_t s = 0; s < rep.stage_names.size(); ++s) {
      txt << "stage " << rep.stage_names[s] << ": " << rep.stage_successes[s] << " / "
          << rep.trials << "\n";
    }
    if (rep.has_spearman) {
      txt << "score-vs-mse spearman: " << rep.score_spearman << "\n";
    }
  }
}

}  // namespace choice::harness

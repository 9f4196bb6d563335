#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "choice/baselines/bc.hpp"
#include "choice/policy/choice_policy.hpp"

using namespace choice;
using namespace choice::policy;

namespace {

ChunkedDataset toy_dataset(const ModelConfig& c, int samples, std::uint64_t seed) {
  num::Rng rng(seed);
  ChunkedDataset data;
  data.obs_dim = c.obs_dim;
  data.horizon = c.horizon;
  data.action_dim = c.action_dim;
  for (int i = 0; i < samples; ++i) {
    ChunkedSample s;
    s.obs.resize(static_cast<std::size_t>(c.obs_dim));
    for (double& v : s.obs) v = rng.uniform(-1.0, 1.0);
    s.target = ActionChunk(c.horizon, c.action_dim);
    for (double& v : s.target.values) v = rng.uniform(-1.0, 1.0);
    data.samples.push_back(std::move(s));
  }
  return data;
}

ActionChunk random_chunk(int t, int a, num::Rng& rng) {
  ActionChunk c(t, a);
  for (double& v : c.values) v = rng.uniform(-2.0, 2.0);
  return c;
}

// brute-force double loop, independent of chunk_mse
double mse_oracle(const ActionChunk& a, const ActionChunk& b) {
  double acc = 0.0;
  for (int t = 0; t < a.horizon; ++t) {
    for (int d = 0; d < a.action_dim; ++d) {
      double diff = a.at(t, d) - b.at(t, d);
      acc += diff * diff;
    }
  }
  return acc / (static_cast<double>(a.horizon) * a.action_dim);
}

}  // namespace

TEST_CASE("propose: zero-weight heads give zero proposals and scores") {
  ModelConfig c;
  c.k = 3;
  c.horizon = 4;
  c.action_dim = 2;
  c.obs_dim = 2;
  ChoicePolicyModel m = make_choice_model(c, num::Rng(1));
  m.proposal_head = num::make_zero_mlp({c.feature_dim, c.head_hidden, c.proposal_out()});
  m.score_head = num::make_zero_mlp({c.feature_dim, c.head_hidden, c.k});
  ProposalSet set = propose(m, {0.3, -0.4});
  REQUIRE(set.k() == 3);
  for (const ActionChunk& p : set.proposals) {
    for (double v : p.values) CHECK(v == 0.0);
  }
  for (double s : set.scores) CHECK(s == 0.0);
}

TEST_CASE("propose: K=1 degenerates to a single chunk") {
  ModelConfig c;
  c.k = 1;
  c.horizon = 5;
  c.action_dim = 3;
  c.obs_dim = 2;
  ChoicePolicyModel m = make_choice_model(c, num::Rng(2));
  ProposalSet set = propose(m, {0.1, 0.2});
  CHECK(set.k() == 1);
  CHECK(set.proposals[0].horizon == 5);
  CHECK(set.proposals[0].action_dim == 3);
}

TEST_CASE("propose reshape matches the flat-index oracle") {
  ModelConfig c;
  c.k = 4;
  c.horizon = 3;
  c.action_dim = 5;
  c.obs_dim = 3;
  ChoicePolicyModel m = make_choice_model(c, num::Rng(3));
  Observation obs{0.5, -0.2, 0.9};
  ProposalSet set = propose(m, obs);

  // the flat head output, reproduced via the raw forward chain
  num::Tensor feat = num::mlp_forward(m.encoder, num::Tensor({3}, obs));
  num::Tensor flat = num::mlp_forward(m.proposal_head, feat);
  for (int k = 0; k < c.k; ++k) {
    for (int t = 0; t < c.horizon; ++t) {
      for (int a = 0; a < c.action_dim; ++a) {
        std::size_t idx = static_cast<std::size_t>(((k * c.horizon) + t) * c.action_dim + a);
        CHECK(set.proposals[static_cast<std::size_t>(k)].at(t, a) == flat[idx]);
      }
    }
  }
}

TEST_CASE("propose rejects observation dim mismatch") {
  ModelConfig c;
  ChoicePolicyModel m = make_choice_model(c, num::Rng(4));
  CHECK_THROWS_AS(propose(m, {1.0, 2.0, 3.0}), std::invalid_argument);
}

TEST_CASE("per_proposal_losses: exact zero on equality, 1.0 on unit offset") {
  num::Rng rng(5);
  ActionChunk gt = random_chunk(4, 3, rng);
  ProposalSet set;
  set.proposals.push_back(gt);
  set.scores = {0.0};
  std::vector<double> l1 = per_proposal_losses(set, gt);
  CHECK(l1[0] == 0.0);

  ActionChunk ones(4, 3);
  for (double& v : ones.values) v = 1.0;
  ProposalSet set2;
  set2.proposals = {ActionChunk(4, 3)};  // all zeros
  set2.scores = {0.0};
  std::vector<double> l2 = per_proposal_losses(set2, ones);
  CHECK(l2[0] == 1.0);
}

TEST_CASE("per_proposal_losses matches brute-force summation") {
  num::Rng rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    int t = 1 + rng.uniform_int(10);
    int a = 1 + rng.uniform_int(6);
    ActionChunk gt = random_chunk(t, a, rng);
    ProposalSet set;
    int k = 1 + rng.uniform_int(8);
    for (int i = 0; i < k; ++i) set.proposals.push_back(random_chunk(t, a, rng));
    set.scores.assign(static_cast<std::size_t>(k), 0.0);
    std::vector<double> losses = per_proposal_losses(set, gt);
    for (int i = 0; i < k; ++i) {
      CHECK(std::abs(losses[static_cast<std::size_t>(i)] -
                     mse_oracle(set.proposals[static_cast<std::size_t>(i)], gt)) <= 1e-12);
    }
  }
}

TEST_CASE("per_proposal_losses rejects shape mismatch") {
  ProposalSet set;
  set.proposals = {ActionChunk(2, 2)};
  set.scores = {0.0};
  CHECK_THROWS_AS(per_proposal_losses(set, ActionChunk(3, 2)), std::invalid_argument);
}

TEST_CASE("select_winner: argmin with lowest-index tie break") {
  CHECK(select_winner(std::vector<double>{0.5, 0.2}) == 1);
  CHECK(select_winner(std::vector<double>{0.3, 0.3}) == 0);
  CHECK(select_winner(std::vector<double>{1.0}) == 0);
  CHECK_THROWS_AS(select_winner(std::vector<double>{}), std::invalid_argument);

  num::Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> losses(8);
    for (double& v : losses) v = rng.uniform(0.0, 1.0);
    int best = 0;
    for (int i = 1; i < 8; ++i) {
      if (losses[static_cast<std::size_t>(i)] < losses[static_cast<std::size_t>(best)]) best = i;
    }
    CHECK(select_winner(losses) == best);
  }
}

TEST_CASE("training_loss: score_loss is zero when scores equal true losses") {
  // hand-built model: zero proposal head (all proposals zero), score head
  // biased to the exact loss values
  ModelConfig c;
  c.k = 2;
  c.horizon = 2;
  c.action_dim = 2;
  c.obs_dim = 2;
  ChoicePolicyModel m = make_choice_model(c, num::Rng(8));
  m.proposal_head = num::make_zero_mlp({c.feature_dim, c.head_hidden, c.proposal_out()});
  m.score_head = num::make_zero_mlp({c.feature_dim, c.head_hidden, c.k});

  ActionChunk gt(2, 2);
  for (double& v : gt.values) v = 1.0;  // both proposals all-zero: loss 1.0 each
  m.score_head.biases[1][0] = 1.0;
  m.score_head.biases[1][1] = 1.0;
  LossBreakdown lb = training_loss(m, {0.1, 0.2}, gt);
  CHECK(lb.score_loss == 0.0);
  CHECK(lb.action_loss == 1.0);
  CHECK(lb.winner == 0);
}

TEST_CASE("training_loss: worked example scores [0,0] losses [0.5,0.2]") {
  // score_loss = ((0-0.5)^2 + (0-0.2)^2)/2 = 0.145, winner = 1
  ModelConfig c;
  c.k = 2;
  c.horizon = 1;
  c.action_dim = 1;
  c.obs_dim = 1;
  c.feature_dim = 2;
  ChoicePolicyModel m = make_choice_model(c, num::Rng(9));
  m.proposal_head = num::make_zero_mlp({c.feature_dim, c.head_hidden, c.proposal_out()});
  m.score_head = num::make_zero_mlp({c.feature_dim, c.head_hidden, c.k});
  // proposals fixed at gt - sqrt(0.5) and gt - sqrt(0.2) via head biases
  ActionChunk gt(1, 1);
  gt.values[0] = 1.0;
  m.proposal_head.biases[1][0] = 1.0 - std::sqrt(0.5);
  m.proposal_head.biases[1][1] = 1.0 - std::sqrt(0.2);
  LossBreakdown lb = training_loss(m, {0.3}, gt);
  CHECK(lb.winner == 1);
  CHECK(lb.action_loss == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(lb.score_loss == doctest::Approx(0.145).epsilon(1e-12));
  CHECK(lb.total == doctest::Approx(0.345).epsilon(1e-12));
}

TEST_CASE("winner consistency: backward reports the argmin of the losses") {
  ModelConfig c;
  c.k = 5;
  c.horizon = 3;
  c.action_dim = 2;
  c.obs_dim = 3;
  num::Rng rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    ChoicePolicyModel m =
        make_choice_model(c, num::Rng(100 + static_cast<std::uint64_t>(trial)));
    Observation obs{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    ActionChunk gt = random_chunk(3, 2, rng);

    ProposalSet set = propose(m, obs);
    std::vector<double> losses = per_proposal_losses(set, gt);
    int expected_winner = select_winner(losses);

    ModelGrads grads = make_zero_grads(m);
    LossBreakdown lb = training_loss_backward(m, obs, gt, grads);
    CHECK(lb.winner == expected_winner);
  }
}

TEST_CASE("score-target detachment: score head never changes action_loss") {
  ModelConfig c;
  c.k = 3;
  c.horizon = 2;
  c.action_dim = 2;
  c.obs_dim = 2;
  ChoicePolicyModel m = make_choice_model(c, num::Rng(11));
  num::Rng rng(12);
  ActionChunk gt = random_chunk(2, 2, rng);
  Observation obs{0.4, -0.6};
  LossBreakdown before = training_loss(m, obs, gt);
  // perturb every score-head parameter
  for (auto& w : m.score_head.weights) {
    for (double& v : w.data()) v += rng.uniform(-1.0, 1.0);
  }
  for (auto& b : m.score_head.biases) {
    for (double& v : b.data()) v += rng.uniform(-1.0, 1.0);
  }
  LossBreakdown after = training_loss(m, obs, gt);
  CHECK(after.action_loss == before.action_loss);
  CHECK(after.winner == before.winner);
}

TEST_CASE("infer picks the lowest-score proposal; single forward pass") {
  ModelConfig c;
  c.k = 3;
  c.horizon = 2;
  c.action_dim = 1;
  c.obs_dim = 1;
  c.feature_dim = 2;
  ChoicePolicyModel m = make_choice_model(c, num::Rng(13));
  m.score_head = num::make_zero_mlp({c.feature_dim, c.head_hidden, c.k});
  m.score_head.biases[1][0] = 0.9;
  m.score_head.biases[1][1] = 0.1;
  m.score_head.biases[1][2] = 0.5;

  reset_eval_counters();
  ActionChunk a = infer(m, {0.7});
  CHECK(eval_counters().encoder == 1);
  CHECK(eval_counters().proposal == 1);
  CHECK(eval_counters().score == 1);

  ProposalSet set = propose(m, {0.7});
  CHECK(infer_index(set) == 1);
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    CHECK(a.values[i] == set.proposals[1].values[i]);
  }
}

TEST_CASE("infer equals propose + exhaustive argmin on random models") {
  num::Rng rng(14);
  for (int trial = 0; trial < 20; ++trial) {
    ModelConfig c;
    c.k = 1 + rng.uniform_int(6);
    c.horizon = 1 + rng.uniform_int(5);
    c.action_dim = 1 + rng.uniform_int(3);
    c.obs_dim = 2;
    ChoicePolicyModel m =
        make_choice_model(c, num::Rng(200 + static_cast<std::uint64_t>(trial)));
    Observation obs{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    ProposalSet set = propose(m, obs);
    int best = 0;
    for (int k = 1; k < set.k(); ++k) {
      if (set.scores[static_cast<std::size_t>(k)] <
          set.scores[static_cast<std::size_t>(best)]) {
        best = k;
      }
    }
    ActionChunk a = infer(m, obs);
    for (std::size_t i = 0; i < a.values.size(); ++i) {
      CHECK(a.values[i] == set.proposals[static_cast<std::size_t>(best)].values[i]);
    }
  }
}

TEST_CASE("chunk reshape bijectivity: proposals tile the flat head output") {
  ModelConfig c;
  c.k = 6;
  c.horizon = 4;
  c.action_dim = 3;
  c.obs_dim = 2;
  ChoicePolicyModel m = make_choice_model(c, num::Rng(15));
  Observation obs{0.2, 0.8};
  num::Tensor feat = num::mlp_forward(m.encoder, num::Tensor({2}, obs));
  num::Tensor flat = num::mlp_forward(m.proposal_head, feat);
  ProposalSet set = propose(m, obs);
  std::vector<double> reflat;
  for (const ActionChunk& p : set.proposals) {
    reflat.insert(reflat.end(), p.values.begin(), p.values.end());
  }
  REQUIRE(reflat.size() == flat.size());
  for (std::size_t i = 0; i < flat.size(); ++i) CHECK(reflat[i] == flat[i]);
}

TEST_CASE("fit memorizes a single sample") {
  ModelConfig c;
  c.k = 2;
  c.horizon = 2;
  c.action_dim = 2;
  c.obs_dim = 2;
  c.feature_dim = 16;
  c.encoder_hidden = 16;
  c.head_hidden = 32;
  ChoicePolicyModel m = make_choice_model(c, num::Rng(16));
  ChunkedDataset data = toy_dataset(c, 1, 99);
  FitConfig fc;
  fc.epochs = 2000;
  fc.batch_size = 1;
  fc.seed = 5;
  fc.adam.lr = 3e-3;
  FitResult res = fit(m, data, fc);
  CHECK(res.epoch_action.back() < 1e-4);
}

TEST_CASE("fit is deterministic per seed") {
  ModelConfig c;
  c.k = 3;
  c.horizon = 2;
  c.action_dim = 2;
  c.obs_dim = 2;
  c.feature_dim = 8;
  c.encoder_hidden = 8;
  c.head_hidden = 16;
  ChunkedDataset data = toy_dataset(c, 32, 77);
  FitConfig fc;
  fc.epochs = 5;
  fc.batch_size = 8;
  fc.seed = 3;

  ChoicePolicyModel m1 = make_choice_model(c, num::Rng(17));
  ChoicePolicyModel m2 = make_choice_model(c, num::Rng(17));
  FitResult r1 = fit(m1, data, fc);
  FitResult r2 = fit(m2, data, fc);
  REQUIRE(r1.step_action.size() == r2.step_action.size());
  for (std::size_t i = 0; i < r1.step_action.size(); ++i) {
    CHECK(r1.step_action[i] == r2.step_action[i]);
  }
}

TEST_CASE("fit rejects an empty dataset") {
  ModelConfig c;
  ChoicePolicyModel m = make_choice_model(c, num::Rng(18));
  ChunkedDataset data;
  data.obs_dim = c.obs_dim;
  data.horizon = c.horizon;
  data.action_dim = c.action_dim;
  CHECK_THROWS_AS(fit(m, data, FitConfig{}), std::invalid_argument);
}

TEST_CASE("K=1 choice with a zeroed score head tracks bc step for step") {
  // same component init streams, same batch schedule; the zero score head
  // sends exactly zero gradient into the encoder (relu subgradient at 0 is
  // 0), so the action path must match behavior cloning bit for bit
  ModelConfig c;
  c.k = 1;
  c.horizon = 3;
  c.action_dim = 2;
  c.obs_dim = 2;
  c.feature_dim = 16;
  c.encoder_hidden = 16;
  c.head_hidden = 32;
  ChunkedDataset data = toy_dataset(c, 48, 55);

  ChoicePolicyModel cm = make_choice_model(c, num::Rng(19));
  cm.score_head = num::make_zero_mlp({c.feature_dim, c.head_hidden, c.k});
  baselines::BcModel bm = baselines::make_bc_model(c, num::Rng(19));

  // identical initialization by construction of the split streams
  REQUIRE(cm.encoder.weights[0].data() == bm.encoder.weights[0].data());
  REQUIRE(cm.proposal_head.weights[0].data() == bm.action_head.weights[0].data());

  FitConfig fc;
  fc.epochs = 25;
  fc.batch_size = 16;
  fc.seed = 4;
  FitResult cr = fit(cm, data, fc);
  FitResult br = baselines::bc_fit(bm, data, fc);
  REQUIRE(cr.step_action.size() == br.step_action.size());
  for (std::size_t i = 0; i < cr.step_action.size(); ++i) {
    CHECK(std::abs(cr.step_action[i] - br.step_action[i]) <= 1e-10);
  }
}

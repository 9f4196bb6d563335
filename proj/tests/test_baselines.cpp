#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "choice/baselines/bc.hpp"
#include "choice/baselines/denoiser.hpp"
#include "choice/baselines/selection.hpp"
#include "choice/policy/choice_policy.hpp"

using namespace choice;
using namespace choice::baselines;
using policy::ActionChunk;
using policy::ChunkedDataset;
using policy::ChunkedSample;
using policy::ModelConfig;
using policy::ProposalSet;

namespace {

// one fixed observation, targets split between +offset and -offset
ChunkedDataset two_mode_dataset(int samples, int horizon, double offset) {
  ChunkedDataset data;
  data.obs_dim = 1;
  data.horizon = horizon;
  data.action_dim = 1;
  for (int i = 0; i < samples; ++i) {
    ChunkedSample s;
    s.obs = {0.0};
    s.target = ActionChunk(horizon, 1);
    double v = (i % 2 == 0) ? offset : -offset;
    for (double& x : s.target.values) x = v;
    data.samples.push_back(std::move(s));
  }
  return data;
}

double chunk_mean(const ActionChunk& c) {
  double acc = 0.0;
  for (double v : c.values) acc += v;
  return acc / static_cast<double>(c.values.size());
}

}  // namespace

TEST_CASE("bc memorizes a single sample") {
  ModelConfig c;
  c.k = 1;
  c.horizon = 2;
  c.action_dim = 2;
  c.obs_dim = 2;
  c.feature_dim = 16;
  c.encoder_hidden = 16;
  c.head_hidden = 32;
  BcModel m = make_bc_model(c, num::Rng(1));
  ChunkedDataset data;
  data.obs_dim = 2;
  data.horizon = 2;
  data.action_dim = 2;
  ChunkedSample s;
  s.obs = {0.3, -0.7};
  s.target = ActionChunk(2, 2);
  s.target.values = {0.5, -0.2, 0.1, 0.9};
  data.samples.push_back(s);

  policy::FitConfig fc;
  fc.epochs = 2000;
  fc.batch_size = 1;
  fc.seed = 2;
  fc.adam.lr = 3e-3;
  policy::FitResult res = bc_fit(m, data, fc);
  CHECK(res.epoch_total.back() < 1e-4);
}

TEST_CASE("bc collapses a symmetric two-mode dataset to the midpoint") {
  ModelConfig c;
  c.k = 1;
  c.horizon = 4;
  c.action_dim = 1;
  c.obs_dim = 1;
  c.feature_dim = 16;
  c.encoder_hidden = 16;
  c.head_hidden = 32;
  double d = 1.0;  // mode separation: targets at +/- d/2
  BcModel m = make_bc_model(c, num::Rng(3));
  ChunkedDataset data = two_mode_dataset(100, 4, d / 2.0);
  policy::FitConfig fc;
  fc.epochs = 150;
  fc.batch_size = 32;
  fc.seed = 4;
  bc_fit(m, data, fc);
  ActionChunk pred = bc_infer(m, {0.0});
  CHECK(std::abs(chunk_mean(pred) - 0.0) < 0.05 * d);
}

TEST_CASE("bc determinism: same seed, same loss trajectory") {
  ModelConfig c;
  c.k = 1;
  c.horizon = 2;
  c.action_dim = 2;
  c.obs_dim = 2;
  c.feature_dim = 8;
  c.encoder_hidden = 8;
  c.head_hidden = 16;
  ChunkedDataset data;
  data.obs_dim = 2;
  data.horizon = 2;
  data.action_dim = 2;
  num::Rng rng(5);
  for (int i = 0; i < 40; ++i) {
    ChunkedSample s;
    s.obs = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    s.target = ActionChunk(2, 2);
    for (double& v : s.target.values) v = rng.uniform(-1, 1);
    data.samples.push_back(std::move(s));
  }
  policy::FitConfig fc;
  fc.epochs = 8;
  fc.batch_size = 8;
  fc.seed = 6;
  BcModel m1 = make_bc_model(c, num::Rng(7));
  BcModel m2 = make_bc_model(c, num::Rng(7));
  policy::FitResult r1 = bc_fit(m1, data, fc);
  policy::FitResult r2 = bc_fit(m2, data, fc);
  REQUIRE(r1.step_action.size() == r2.step_action.size());
  for (std::size_t i = 0; i < r1.step_action.size(); ++i) {
    CHECK(r1.step_action[i] == r2.step_action[i]);
  }
}

TEST_CASE("mean selection of +1/-1 proposals is the zero chunk") {
  ProposalSet set;
  ActionChunk plus(3, 2), minus(3, 2);
  for (double& v : plus.values) v = 1.0;
  for (double& v : minus.values) v = -1.0;
  set.proposals = {plus, minus};
  set.scores = {0.5, 0.5};
  num::Rng rng(8);
  Selection sel = select_with_strategy(set, SelectionStrategy::mean(), rng);
  CHECK(sel.index == -1);
  for (double v : sel.chunk.values) CHECK(v == 0.0);
}

TEST_CASE("random selection is reproducible for a fixed seed") {
  ProposalSet set;
  for (int i = 0; i < 5; ++i) {
    ActionChunk c(2, 2);
    for (double& v : c.values) v = i;
    set.proposals.push_back(std::move(c));
  }
  set.scores.assign(5, 0.0);

  std::vector<int> picks1, picks2;
  num::Rng r1(9), r2(9);
  for (int i = 0; i < 50; ++i) {
    picks1.push_back(select_with_strategy(set, SelectionStrategy::random(), r1).index);
    picks2.push_back(select_with_strategy(set, SelectionStrategy::random(), r2).index);
  }
  CHECK(picks1 == picks2);
  // not all identical picks
  bool varied = false;
  for (int p : picks1) varied = varied || p != picks1[0];
  CHECK(varied);
}

TEST_CASE("score strategy is extensionally equal to policy infer") {
  ModelConfig c;
  c.k = 4;
  c.horizon = 3;
  c.action_dim = 2;
  c.obs_dim = 2;
  num::Rng rng(10);
  for (int trial = 0; trial < 10; ++trial) {
    policy::ChoicePolicyModel m =
        policy::make_choice_model(c, num::Rng(300 + static_cast<std::uint64_t>(trial)));
    policy::Observation obs{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    ProposalSet set = policy::propose(m, obs);
    num::Rng sel_rng(0);
    Selection sel = select_with_strategy(set, SelectionStrategy::score(), sel_rng);
    ActionChunk via_infer = policy::infer(m, obs);
    REQUIRE(sel.chunk.values.size() == via_infer.values.size());
    for (std::size_t i = 0; i < sel.chunk.values.size(); ++i) {
      CHECK(sel.chunk.values[i] == via_infer.values[i]);
    }
  }
}

TEST_CASE("single selection with an out-of-range index is rejected") {
  ProposalSet set;
  set.proposals = {ActionChunk(2, 2), ActionChunk(2, 2)};
  set.scores = {0.1, 0.2};
  num::Rng rng(11);
  CHECK_THROWS_AS(select_with_strategy(set, SelectionStrategy::single(2), rng),
                  std::invalid_argument);
  CHECK(select_with_strategy(set, SelectionStrategy::single(1), rng).index == 1);
}

TEST_CASE("selection strategy names round-trip through the parser") {
  for (const char* name : {"score", "random", "mean", "single:3"}) {
    auto s = parse_selection(name);
    REQUIRE(s.has_value());
    CHECK(s->name() == name);
  }
  CHECK_FALSE(parse_selection("best").has_value());
}

TEST_CASE("denoiser with S=1 and an exact-residual net returns the target chunk") {
  DenoiserConfig dc;
  dc.horizon = 2;
  dc.action_dim = 1;
  dc.obs_dim = 1;
  dc.feature_dim = 4;
  dc.encoder_hidden = 4;
  dc.steps = 1;
  dc.beta_max = 0.5;
  DenoiserModel m = make_denoiser(dc, num::Rng(12));

  // target chunk x0*; handcraft a single linear layer predicting the exact
  // residual eps = (x - sqrt(abar) x0*) / sqrt(1 - abar) for any input x
  ActionChunk x0(2, 1);
  x0.values = {0.7, -0.3};
  double abar = m.alpha_bars[0];
  double sa = std::sqrt(abar);
  double sb = std::sqrt(1.0 - abar);
  int in_dim = dc.feature_dim + dc.chunk_size() + kStepEmbedDim;
  m.noise_net = num::make_zero_mlp({in_dim, dc.chunk_size()}, num::Activation::kIdentity);
  for (int i = 0; i < dc.chunk_size(); ++i) {
    m.noise_net.weights[0].at(i, dc.feature_dim + i) = 1.0 / sb;
    m.noise_net.biases[0][static_cast<std::size_t>(i)] =
        -sa * x0.values[static_cast<std::size_t>(i)] / sb;
  }

  ActionChunk init(2, 1);
  init.values = {1.3, -2.1};  // arbitrary
  ActionChunk out = denoiser_denoise(m, {0.0}, init);
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    CHECK(out.values[i] == doctest::Approx(x0.values[i]).epsilon(1e-12));
  }
}

TEST_CASE("denoiser sampling covers both modes of a bimodal dataset") {
  DenoiserConfig dc;
  dc.horizon = 2;
  dc.action_dim = 1;
  dc.obs_dim = 1;
  dc.feature_dim = 8;
  dc.encoder_hidden = 8;
  dc.noise_hidden = 64;
  DenoiserModel m = make_denoiser(dc, num::Rng(13));
  double d = 1.0;
  ChunkedDataset data = two_mode_dataset(200, 2, d / 2.0);
  DenoiserFitConfig fc;
  fc.epochs = 400;
  fc.batch_size = 32;
  fc.seed = 14;
  denoiser_fit(m, data, fc);

  num::Rng rng(15);
  int near_mode = 0, near_plus = 0, near_minus = 0;
  const int samples = 200;
  for (int i = 0; i < samples; ++i) {
    ActionChunk s = denoiser_sample(m, {0.0}, rng);
    double mean = chunk_mean(s);
    if (std::abs(mean - d / 2.0) <= 0.25 * d) {
      ++near_mode;
      ++near_plus;
    } else if (std::abs(mean + d / 2.0) <= 0.25 * d) {
      ++near_mode;
      ++near_minus;
    }
  }
  CHECK(near_mode >= samples * 8 / 10);
  CHECK(near_plus > 0);
  CHECK(near_minus > 0);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "choice/numerics/adam.hpp"
#include "choice/numerics/checkpoint.hpp"
#include "choice/numerics/mlp.hpp"
#include "choice/numerics/rng.hpp"
#include "choice/numerics/tensor.hpp"

using namespace choice::num;

namespace {

// Independent straight-line re-evaluation of the affine + relu chain, kept
// free of the library's Tensor loops on purpose.
std::vector<double> mlp_forward_oracle(const MlpParams& p, const std::vector<double>& in) {
  std::vector<double> x = in;
  for (int l = 0; l < p.layer_count(); ++l) {
    int rows = p.weights[l].rows();
    int cols = p.weights[l].cols();
    std::vector<double> y(static_cast<std::size_t>(rows));
    for (int r = 0; r < rows; ++r) {
      double acc = p.biases[l][static_cast<std::size_t>(r)];
      for (int c = 0; c < cols; ++c) {
        acc += p.weights[l].at(r, c) * x[static_cast<std::size_t>(c)];
      }
      bool hidden = l + 1 < p.layer_count();
      y[static_cast<std::size_t>(r)] =
          (p.activation == Activation::kRelu && hidden && acc < 0.0) ? 0.0 : acc;
    }
    x = std::move(y);
  }
  return x;
}

double loss_of(const MlpParams& p, const Tensor& input, const Tensor& target) {
  Tensor out = mlp_forward(p, input);
  double acc = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    double d = out[i] - target[i];
    acc += 0.5 * d * d;
  }
  return acc;
}

// Central finite differences over every parameter; returns max relative
// error against the analytic gradients.
double max_grad_rel_error(MlpParams p, const Tensor& input, const Tensor& target,
                          double h = 1e-5) {
  Tensor out = mlp_forward(p, input);
  Tensor dout(out.shape());
  for (std::size_t i = 0; i < out.size(); ++i) dout[i] = out[i] - target[i];
  MlpBackwardResult analytic = mlp_backward(p, input, dout);

  double worst = 0.0;
  auto check = [&](Tensor& param, const Tensor& grad) {
    for (std::size_t i = 0; i < param.size(); ++i) {
      double orig = param[i];
      param[i] = orig + h;
      double up = loss_of(p, input, target);
      param[i] = orig - h;
      double down = loss_of(p, input, target);
      param[i] = orig;
      double fd = (up - down) / (2.0 * h);
      double denom = std::max({std::abs(fd), std::abs(grad[i]), 1e-8});
      worst = std::max(worst, std::abs(fd - grad[i]) / denom);
    }
  };
  for (int l = 0; l < p.layer_count(); ++l) {
    check(p.weights[l], analytic.grads.weights[static_cast<std::size_t>(l)]);
    check(p.biases[l], analytic.grads.biases[static_cast<std::size_t>(l)]);
  }
  return worst;
}

Tensor random_tensor(std::vector<int> shape, Rng& rng, double scale = 1.0) {
  Tensor t(std::move(shape));
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = rng.uniform(-scale, scale);
  return t;
}

}  // namespace

TEST_CASE("tensor validates shape against data length") {
  CHECK_NOTHROW(Tensor({2, 3}, std::vector<double>(6, 0.0)));
  CHECK_THROWS_AS(Tensor({2, 3}, std::vector<double>(5, 0.0)), std::invalid_argument);
  CHECK_THROWS_AS(Tensor({0, 3}), std::invalid_argument);
}

TEST_CASE("rng: identical seeds give identical streams, splits are independent") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  // a has consumed 100 draws, b's split must not care
  Rng sa = a.split(7);
  Rng sb = b.split(7);
  for (int i = 0; i < 10; ++i) CHECK(sa.next_u64() == sb.next_u64());

  Rng other = a.split(8);
  bool all_equal = true;
  Rng sa2 = a.split(7);
  for (int i = 0; i < 10; ++i) all_equal = all_equal && (sa2.next_u64() == other.next_u64());
  CHECK_FALSE(all_equal);
}

TEST_CASE("rng uniform stays in range") {
  Rng rng(3);
  for (int i = 0; i < 1000; ++i) {
    double u = rng.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("mlp_forward: zero weights and biases give zero output") {
  MlpParams p = make_zero_mlp({3, 4, 2});
  Tensor in({3}, {1.0, -2.0, 3.0});
  Tensor out = mlp_forward(p, in);
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == 0.0);
}

TEST_CASE("mlp_forward: identity single linear layer returns its input") {
  MlpParams p = make_zero_mlp({3, 3});
  for (int i = 0; i < 3; ++i) p.weights[0].at(i, i) = 1.0;
  Tensor in({3}, {0.5, -1.5, 2.0});
  Tensor out = mlp_forward(p, in);
  for (std::size_t i = 0; i < 3; ++i) CHECK(out[i] == in[i]);
}

TEST_CASE("mlp_forward matches the straight-line oracle on random nets") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    Rng net_rng = rng.split(static_cast<std::uint64_t>(trial));
    MlpParams p = make_mlp({4, 8, 8, 3}, net_rng);
    std::vector<double> in(4);
    for (double& v : in) v = rng.uniform(-2.0, 2.0);
    Tensor out = mlp_forward(p, Tensor({4}, in));
    std::vector<double> expect = mlp_forward_oracle(p, in);
    for (std::size_t i = 0; i < out.size(); ++i) {
      CHECK(out[i] == doctest::Approx(expect[i]).epsilon(1e-14));
    }
  }
}

TEST_CASE("mlp_forward rejects shape mismatch") {
  MlpParams p = make_zero_mlp({3, 2});
  CHECK_THROWS_AS(mlp_forward(p, Tensor({4})), std::invalid_argument);
}

TEST_CASE("mlp_backward: linear net closed form W_grad = (Wx - y) x^T") {
  Rng rng(5);
  MlpParams p = make_mlp({3, 2}, rng, Activation::kIdentity);
  Tensor x({3}, {0.7, -1.1, 0.4});
  Tensor y({2}, {0.2, -0.3});
  Tensor out = mlp_forward(p, x);
  Tensor dout({2});
  for (std::size_t i = 0; i < 2; ++i) dout[i] = out[i] - y[i];
  MlpBackwardResult res = mlp_backward(p, x, dout);
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 3; ++c) {
      double expect = (out[static_cast<std::size_t>(r)] - y[static_cast<std::size_t>(r)]) *
                      x[static_cast<std::size_t>(c)];
      CHECK(res.grads.weights[0].at(r, c) == doctest::Approx(expect).epsilon(1e-14));
    }
  }
}

TEST_CASE("mlp_backward: dead relus stop gradient") {
  // zero weights: every hidden preact is 0, relu' there is 0 by convention,
  // so first-layer parameter gradients vanish
  MlpParams p = make_zero_mlp({2, 3, 1});
  Tensor x({2}, {1.0, 1.0});
  Tensor dout({1}, {1.0});
  MlpBackwardResult res = mlp_backward(p, x, dout);
  for (std::size_t i = 0; i < res.grads.weights[0].size(); ++i) {
    CHECK(res.grads.weights[0][i] == 0.0);
  }
  for (std::size_t i = 0; i < res.grads.biases[0].size(); ++i) {
    CHECK(res.grads.biases[0][i] == 0.0);
  }
}

TEST_CASE("mlp_backward agrees with central finite differences") {
  Rng rng(17);
  double worst = 0.0;
  for (int trial = 0; trial < 25; ++trial) {
    Rng net_rng = rng.split(static_cast<std::uint64_t>(trial));
    MlpParams p = make_mlp({3, 8, 8, 2}, net_rng);
    Tensor in = random_tensor({3}, rng);
    Tensor target = random_tensor({2}, rng);
    worst = std::max(worst, max_grad_rel_error(p, in, target));
  }
  CHECK(worst < 1e-4);
}

TEST_CASE("adam: zero gradient leaves parameters unchanged") {
  Rng rng(23);
  MlpParams p = make_mlp({2, 3}, rng);
  MlpParams before = p;
  AdamState st = make_adam(p);
  MlpGrads g = make_zero_grads(p);
  adam_step(st, p, g);
  adam_step(st, p, g);
  CHECK(st.step == 2);
  for (std::size_t i = 0; i < p.weights[0].size(); ++i) {
    CHECK(p.weights[0][i] == before.weights[0][i]);
  }
}

TEST_CASE("adam first step matches the hand-evaluated update formula") {
  // single scalar parameter w, gradient g: after one step
  //   m = (1-b1) g, v = (1-b2) g^2, mhat = g, vhat = g^2
  //   w' = w - lr * g / (|g| + eps)
  MlpParams p = make_zero_mlp({1, 1});
  p.weights[0][0] = 0.5;
  AdamConfig cfg;
  AdamState st = make_adam(p, cfg);
  MlpGrads g = make_zero_grads(p);
  g.weights[0][0] = 0.3;
  adam_step(st, p, g);
  double expect = 0.5 - cfg.lr * 0.3 / (std::sqrt(0.3 * 0.3) + cfg.eps);
  CHECK(p.weights[0][0] == doctest::Approx(expect).epsilon(1e-15));
}

TEST_CASE("adam: identical runs are bit-identical") {
  auto run = [](std::uint64_t seed) {
    Rng rng(seed);
    MlpParams p = make_mlp({2, 4, 1}, rng);
    AdamState st = make_adam(p);
    for (int i = 0; i < 50; ++i) {
      Tensor in = random_tensor({2}, rng);
      Tensor out = mlp_forward(p, in);
      Tensor dout({1}, {out[0]});
      MlpBackwardResult b = mlp_backward(p, in, dout);
      adam_step(st, p, b.grads);
    }
    return p;
  };
  MlpParams a = run(9), b = run(9);
  for (int l = 0; l < a.layer_count(); ++l) {
    for (std::size_t i = 0; i < a.weights[l].size(); ++i) {
      CHECK(a.weights[l][i] == b.weights[l][i]);
    }
  }
}

TEST_CASE("adam rejects non-finite gradients and names the tensor") {
  Rng rng(31);
  MlpParams p = make_mlp({2, 2}, rng);
  AdamState st = make_adam(p);
  MlpGrads g = make_zero_grads(p);
  g.weights[0][1] = std::numeric_limits<double>::quiet_NaN();
  try {
    adam_step(st, p, g);
    FAIL("expected NumericalError");
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).find("layer 0 weights") != std::string::npos);
  }
}

TEST_CASE("checkpoint round trip is value-exact") {
  Rng rng(77);
  MlpParams p = make_mlp({3, 5, 2}, rng);
  p.weights[1][0] = 0.1 + 0.2;  // a value with no short decimal form
  std::filesystem::path path =
      std::filesystem::temp_directory_path() / "choice_mlp_roundtrip.json";
  save_mlp(p, path.string());
  MlpParams q = load_mlp(path.string());
  REQUIRE(q.layer_dims == p.layer_dims);
  CHECK(q.activation == p.activation);
  for (int l = 0; l < p.layer_count(); ++l) {
    for (std::size_t i = 0; i < p.weights[l].size(); ++i) {
      CHECK(q.weights[l][i] == p.weights[l][i]);
    }
    for (std::size_t i = 0; i < p.biases[l].size(); ++i) {
      CHECK(q.biases[l][i] == p.biases[l][i]);
    }
  }
  std::filesystem::remove(path);
}

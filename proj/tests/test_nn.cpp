#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <vector>

#include "fairpo/nn.hpp"
#include "oracles.hpp"
#include "fairpo/rng.hpp"

using namespace fairpo;

namespace {

std::vector<double> oracle_eval(const MlpNetwork& net, const std::vector<double>& input) {
  return oracles::straight_line_eval(net, input);
}

// Scalar loss L = sum_i weight_i * output_i, used for finite differencing.
double weighted_output_loss(const MlpNetwork& net, const std::vector<double>& input,
                            const std::vector<double>& weights) {
  const auto out = oracle_eval(net, input);
  double loss = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) loss += weights[i] * out[i];
  return loss;
}

MlpNetwork random_net(std::vector<int> sizes, Head head, std::uint64_t seed) {
  return MlpNetwork::create(std::move(sizes), head, seed);
}

}  // namespace

TEST_CASE("zero-parameter softmax net outputs the uniform distribution") {
  auto net = MlpNetwork::create({3, 4}, Head::SoftmaxPolicy, 1);
  for (auto& w : net.weights)
    for (double& v : w.data) v = 0.0;
  const auto out = forward(net, std::vector<double>{0.7, -2.0, 5.0});
  REQUIRE(out.size() == 4);
  for (double p : out) REQUIRE(p == Catch::Approx(0.25).margin(1e-15));
}

TEST_CASE("identity single-layer scalar net returns its input") {
  auto net = MlpNetwork::create({1, 1}, Head::ScalarValue, 1);
  net.weights[0](0, 0) = 1.0;
  net.biases[0][0] = 0.0;
  const auto out = forward(net, std::vector<double>{3.0});
  REQUIRE(out.size() == 1);
  REQUIRE(out[0] == 3.0);
}

TEST_CASE("forward matches an independent straight-line evaluation") {
  Rng rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    const Head head = trial % 2 == 0 ? Head::SoftmaxPolicy : Head::ScalarValue;
    const int out_dim = head == Head::ScalarValue ? 1 : 3 + trial % 3;
    auto net = random_net({4, 8, 6, out_dim}, head, 1000 + trial);
    std::vector<double> input(4);
    for (double& v : input) v = rng.uniform(-2.0, 2.0);
    const auto got = forward(net, input);
    const auto expect = oracle_eval(net, input);
    REQUIRE(got.size() == expect.size());
    for (std::size_t i = 0; i < got.size(); ++i)
      REQUIRE(got[i] == Catch::Approx(expect[i]).margin(1e-12));
  }
}

TEST_CASE("forward rejects dimension mismatch and non-finite input") {
  auto net = random_net({3, 4, 1}, Head::ScalarValue, 5);
  REQUIRE_THROWS_AS(forward(net, std::vector<double>{1.0, 2.0}), std::invalid_argument);
  REQUIRE_THROWS_AS(forward(net, std::vector<double>{1.0, 2.0, std::nan("")}),
                    std::invalid_argument);
}

TEST_CASE("softmax head sums to one and is shift-invariant") {
  auto net = random_net({5, 16, 7}, Head::SoftmaxPolicy, 31);
  Rng rng(12);
  for (int i = 0; i < 1000; ++i) {
    std::vector<double> input(5);
    for (double& v : input) v = rng.uniform(-3.0, 3.0);
    const auto p = forward(net, input);
    double sum = 0.0;
    for (double v : p) {
      REQUIRE(v > 0.0);
      REQUIRE(v < 1.0);
      sum += v;
    }
    REQUIRE(sum == Catch::Approx(1.0).margin(1e-9));
  }
  // shift invariance probed directly on the softmax
  std::vector<double> logits{0.1, -4.0, 2.5, 2.5};
  auto p1 = stable_softmax(logits);
  for (double& z : logits) z += 123.456;
  auto p2 = stable_softmax(logits);
  for (std::size_t i = 0; i < p1.size(); ++i)
    REQUIRE(p1[i] == Catch::Approx(p2[i]).margin(1e-9));
}

TEST_CASE("identical parameters and input produce bit-identical output") {
  auto net = random_net({6, 32, 32, 4}, Head::SoftmaxPolicy, 77);
  const std::vector<double> input{0.3, -1.0, 0.0, 2.0, -0.5, 1.5};
  const auto a = forward(net, input);
  const auto b = forward(net, input);
  REQUIRE(a == b);
}

TEST_CASE("single linear layer gradient is the input") {
  // loss = w * x with x = 2 -> dloss/dw = 2
  auto net = MlpNetwork::create({1, 1}, Head::ScalarValue, 1);
  net.weights[0](0, 0) = 1.5;
  ForwardCache cache;
  forward(net, std::vector<double>{2.0}, cache);
  const double up[1] = {1.0};
  const auto grads = backward(net, cache, up);
  REQUIRE(grads.weight_grads[0](0, 0) == 2.0);
  REQUIRE(grads.bias_grads[0][0] == 1.0);
}

TEST_CASE("zero upstream gradient gives an all-zero gradient set") {
  auto net = random_net({3, 8, 2}, Head::SoftmaxPolicy, 3);
  ForwardCache cache;
  forward(net, std::vector<double>{1.0, -1.0, 0.5}, cache);
  const std::vector<double> up{0.0, 0.0};
  const auto grads = backward(net, cache, up);
  for (const auto& wg : grads.weight_grads)
    for (double v : wg.data) REQUIRE(v == 0.0);
  for (const auto& bg : grads.bias_grads)
    for (double v : bg) REQUIRE(v == 0.0);
}

TEST_CASE("backward rejects a stale cache") {
  auto net = random_net({2, 4, 1}, Head::ScalarValue, 8);
  ForwardCache cache;
  forward(net, std::vector<double>{1.0, 2.0}, cache);
  auto grads = backward(net, cache, std::vector<double>{1.0});
  apply_update(net, grads, 0.1);
  REQUIRE_THROWS_AS(backward(net, cache, std::vector<double>{1.0}), std::invalid_argument);
  ForwardCache empty;
  REQUIRE_THROWS_AS(backward(net, empty, std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("analytic gradients match central finite differences") {
  // >= 20 random cases across both heads, relative tolerance 1e-4
  const double h = 1e-5;
  int cases = 0;
  for (int trial = 0; trial < 24; ++trial) {
    const Head head = trial % 2 == 0 ? Head::SoftmaxPolicy : Head::ScalarValue;
    const int out_dim = head == Head::ScalarValue ? 1 : 2 + trial % 4;
    auto net = random_net({3, 6, 5, out_dim}, head, 500 + trial);
    Rng rng(800 + trial);
    std::vector<double> input(3);
    for (double& v : input) v = rng.uniform(-1.5, 1.5);
    std::vector<double> loss_weights(static_cast<std::size_t>(out_dim));
    for (double& v : loss_weights) v = rng.uniform(-1.0, 1.0);

    ForwardCache cache;
    forward(net, input, cache);
    const auto grads = backward(net, cache, loss_weights);

    for (int l = 0; l < net.num_layers(); ++l) {
      auto check = [&](double& param, double analytic) {
        const double saved = param;
        param = saved + h;
        const double up = weighted_output_loss(net, input, loss_weights);
        param = saved - h;
        const double down = weighted_output_loss(net, input, loss_weights);
        param = saved;
        const double numeric = (up - down) / (2.0 * h);
        const double scale = std::max({1e-6, std::abs(numeric), std::abs(analytic)});
        REQUIRE(std::abs(numeric - analytic) / scale < 1e-4);
      };
      // spot-check a handful of parameters per layer to keep runtime sane
      const Matrix& w = net.weights[static_cast<std::size_t>(l)];
      for (int r = 0; r < w.rows; r += 2)
        for (int c = 0; c < w.cols; c += 2)
          check(net.weights[static_cast<std::size_t>(l)](r, c),
                grads.weight_grads[static_cast<std::size_t>(l)](r, c));
      for (std::size_t i = 0; i < net.biases[static_cast<std::size_t>(l)].size(); i += 2)
        check(net.biases[static_cast<std::size_t>(l)][i],
              grads.bias_grads[static_cast<std::size_t>(l)][i]);
    }
    ++cases;
  }
  REQUIRE(cases >= 20);
}

TEST_CASE("apply_update moves parameters by step times gradient") {
  auto net = MlpNetwork::create({1, 1}, Head::ScalarValue, 1);
  net.weights[0](0, 0) = 1.0;
  auto grads = net.zero_gradients();
  grads.weight_grads[0](0, 0) = 0.5;
  apply_update(net, grads, 0.1);
  REQUIRE(net.weights[0](0, 0) == Catch::Approx(1.05).margin(1e-15));
}

TEST_CASE("zero gradients leave the network unchanged") {
  auto net = random_net({3, 5, 2}, Head::SoftmaxPolicy, 2);
  const auto before = net;
  apply_update(net, net.zero_gradients(), 0.7);
  REQUIRE(net == before);
}

TEST_CASE("two sequential plain updates equal one update with summed gradients") {
  auto a = random_net({4, 3, 1}, Head::ScalarValue, 21);
  auto b = a;
  auto g1 = a.zero_gradients();
  auto g2 = a.zero_gradients();
  Rng rng(4);
  for (auto* g : {&g1, &g2}) {
    for (auto& wg : g->weight_grads)
      for (double& v : wg.data) v = rng.uniform(-1.0, 1.0);
    for (auto& bg : g->bias_grads)
      for (double& v : bg) v = rng.uniform(-1.0, 1.0);
  }
  apply_update(a, g1, 0.3);
  apply_update(a, g2, 0.2);

  auto combined = g1;
  combined.scale(0.3);
  auto scaled2 = g2;
  scaled2.scale(0.2);
  combined.accumulate(scaled2);
  apply_update(b, combined, 1.0);

  for (std::size_t l = 0; l < a.weights.size(); ++l)
    for (std::size_t i = 0; i < a.weights[l].data.size(); ++i)
      REQUIRE(a.weights[l].data[i] == Catch::Approx(b.weights[l].data[i]).margin(1e-12));
}

TEST_CASE("non-finite gradients are rejected") {
  auto net = random_net({2, 2, 1}, Head::ScalarValue, 6);
  auto grads = net.zero_gradients();
  grads.weight_grads[0](0, 0) = std::numeric_limits<double>::infinity();
  REQUIRE_THROWS_AS(apply_update(net, grads, 0.1), std::invalid_argument);
  AdamState adam = AdamState::for_network(net);
  REQUIRE_THROWS_AS(adam_update(net, grads, adam, 0.1), std::invalid_argument);
}

TEST_CASE("network checkpoints round-trip bit-exactly") {
  auto net = random_net({7, 16, 16, 3}, Head::SoftmaxPolicy, 404);
  const auto path = std::filesystem::temp_directory_path() / "fairpo_nn_roundtrip.bin";
  save_network(net, path.string());
  const auto loaded = load_network(path.string());
  REQUIRE(loaded == net);
  std::filesystem::remove(path);
}

TEST_CASE("scalar head requires output dimension one") {
  REQUIRE_THROWS_AS(MlpNetwork::create({3, 4, 2}, Head::ScalarValue, 1), std::invalid_argument);
  REQUIRE_THROWS_AS(MlpNetwork::create({3, 0, 1}, Head::ScalarValue, 1), std::invalid_argument);
}

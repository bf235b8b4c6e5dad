#include <cmath>

#include <doctest.h>

#include "slf/baselines.hpp"
#include "slf/grad_check.hpp"
#include "slf/seq2seq.hpp"
#include "test_util.hpp"

using namespace slf;
using test::flatten;
using test::random_vector;
using test::unflatten;

TEST_SUITE_BEGIN("models");

namespace {

Seq2SeqConfig small_config(std::size_t hidden = 4, std::size_t features = 3,
                           std::size_t horizon = 2, std::size_t classes = 3) {
  Seq2SeqConfig cfg;
  cfg.input_features = features;
  cfg.hidden = hidden;
  cfg.horizon = horizon;
  cfg.num_classes = classes;
  return cfg;
}

Window random_window(const Seq2SeqConfig& cfg, std::size_t n, Rng& rng) {
  Window w;
  w.inputs = Array2D(n, cfg.input_features);
  for (double& v : w.inputs.data) v = rng.uniform(0.0, 1.0);
  w.reversed_target.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    w.reversed_target[n - 1 - t] = w.inputs.at(t, 0);
  }
  w.forecast_target = random_vector(cfg.horizon, rng, 0.0, 1.0);
  w.appliance_label = rng.below(cfg.num_classes);
  return w;
}

}  // namespace

TEST_CASE("encode shape and zero-network fixed point") {
  const auto cfg = small_config(64, 8, 6, 5);
  Seq2SeqParams params(cfg);  // all zeros

  Array2D inputs(144, 8);
  Rng rng(2);
  for (double& v : inputs.data) v = rng.uniform(0.0, 1.0);

  const LatentCode z = encode(params, inputs);
  CHECK(z.z.size() == 64);
  for (double v : z.z) CHECK(v == 0.0);

  Array2D bad(144, 5);
  CHECK_THROWS_AS(encode(params, bad), Error);
}

TEST_CASE("encode is order sensitive for a generic network") {
  const auto cfg = small_config(8, 2, 2, 2);
  Seq2SeqParams params(cfg);
  Rng rng(7);
  params.init(rng);

  Array2D inputs(10, 2);
  for (double& v : inputs.data) v = rng.uniform(0.0, 1.0);
  Array2D reversed(10, 2);
  for (std::size_t t = 0; t < 10; ++t) {
    for (std::size_t c = 0; c < 2; ++c) {
      reversed.at(t, c) = inputs.at(9 - t, c);
    }
  }
  const LatentCode a = encode(params, inputs);
  const LatentCode b = encode(params, reversed);
  double diff = 0.0;
  for (std::size_t j = 0; j < a.z.size(); ++j) diff += std::abs(a.z[j] - b.z[j]);
  CHECK(diff > 1e-6);
}

TEST_CASE("decode_reconstruct contracts") {
  const auto cfg = small_config(4, 3, 2, 2);

  SUBCASE("all-zero params emit the output bias") {
    Seq2SeqParams params(cfg);
    params.decoder_out.b[0] = 0.37;
    LatentCode z{std::vector<double>(4, 0.0)};
    const auto out = decode_reconstruct(params, z, 5, nullptr);
    REQUIRE(out.size() == 5);
    for (double v : out) CHECK(v == doctest::Approx(0.37));
  }

  SUBCASE("teacher-forced output length equals n = 144") {
    Seq2SeqParams params(small_config(16, 8, 6, 5));
    Rng rng(3);
    params.init(rng);
    LatentCode z{random_vector(16, rng)};
    const std::vector<double> teacher = random_vector(144, rng, 0.0, 1.0);
    CHECK(decode_reconstruct(params, z, 144, &teacher).size() == 144);
  }

  SUBCASE("teacher length mismatch is a shape error") {
    Seq2SeqParams params(cfg);
    LatentCode z{std::vector<double>(4, 0.0)};
    const std::vector<double> teacher(7, 0.0);
    CHECK_THROWS_AS(decode_reconstruct(params, z, 5, &teacher), Error);
  }

  SUBCASE("latent size mismatch is a shape error") {
    Seq2SeqParams params(cfg);
    LatentCode z{std::vector<double>(9, 0.0)};
    CHECK_THROWS_AS(decode_reconstruct(params, z, 5, nullptr), Error);
  }
}

TEST_CASE("classify_appliance") {
  const auto cfg = small_config(6, 3, 2, 5);
  Seq2SeqParams params(cfg);
  LatentCode z{std::vector<double>(6, 0.3)};

  const auto probs = classify_appliance(params, z);
  REQUIRE(probs.size() == 5);
  double sum = 0.0;
  for (double p : probs) {
    CHECK(p == doctest::Approx(0.2));  // zero weights: uniform over K
    sum += p;
  }
  CHECK(std::abs(sum - 1.0) < 1e-12);
}

TEST_CASE("generate_forecast contracts") {
  SUBCASE("all-zero params emit the bias m times") {
    auto cfg = small_config(4, 3, 6, 2);
    Seq2SeqParams params(cfg);
    params.generator_out.b[0] = -0.25;
    LatentCode z{std::vector<double>(4, 0.0)};
    const auto out = generate_forecast(params, z, 0.9, nullptr);
    REQUIRE(out.size() == 6);
    for (double v : out) CHECK(v == doctest::Approx(-0.25));
  }

  SUBCASE("teacher mismatch is a shape error") {
    auto cfg = small_config(4, 3, 6, 2);
    Seq2SeqParams params(cfg);
    LatentCode z{std::vector<double>(4, 0.0)};
    const std::vector<double> teacher(4, 0.0);
    CHECK_THROWS_AS(generate_forecast(params, z, 0.5, &teacher), Error);
  }
}

TEST_CASE("loss breakdown adds up and is deterministic") {
  const auto cfg = small_config(5, 3, 2, 3);
  Rng rng(11);
  Seq2SeqParams params(cfg);
  params.init(rng);
  const Window w = random_window(cfg, 6, rng);
  const LossWeights weights = LossWeights::recency(6).reversed();

  const auto l1 = seq2seq_loss(params, w, weights);
  const auto l2 = seq2seq_loss(params, w, weights);
  CHECK(l1.total == l2.total);  // bit-identical, pure function
  CHECK(l1.gen_loss >= 0.0);
  CHECK(l1.dec_loss >= 0.0);
  CHECK(l1.cls_loss >= 0.0);
  CHECK(std::abs(l1.total - (l1.gen_loss + cfg.lambda_dec * l1.dec_loss +
                             cfg.lambda_cls * l1.cls_loss)) < 1e-12);
}

TEST_CASE("joint seq2seq gradient matches finite differences") {
  const auto cfg = small_config(4, 3, 2, 3);
  const LossWeights weights = LossWeights::recency(6).reversed();
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Rng rng(seed);
    Seq2SeqParams params(cfg);
    params.init(rng);
    const Window w = random_window(cfg, 6, rng);

    Seq2SeqGrads grads(cfg);
    seq2seq_forward_backward(params, w, weights, grads);

    ParamRefs prefs, grefs;
    params.collect(prefs);
    grads.collect(grefs);
    auto flat = flatten(prefs);
    const auto analytic = flatten(grefs);
    const double err = grad_check(
        [&](std::span<const double> p) {
          unflatten(p, prefs);
          return seq2seq_loss(params, w, weights).total;
        },
        flat, analytic, 1e-5);
    unflatten(flat, prefs);
    CHECK(err < 1e-3);
  }
}

TEST_CASE("train step is deterministic and reduces loss on one window") {
  const auto cfg = small_config(8, 3, 2, 3);
  const LossWeights weights = LossWeights::recency(12).reversed();
  Rng rng(5);
  const Window w = random_window(cfg, 12, rng);

  auto run = [&](std::uint64_t seed) {
    Rng r(seed);
    Seq2SeqParams params(cfg);
    params.init(r);
    ParamRefs refs;
    params.collect(refs);
    AdamState opt(total_len(refs), {});
    std::vector<double> losses;
    for (int step = 0; step < 60; ++step) {
      losses.push_back(seq2seq_train_step(params, w, weights, opt, 5.0).total);
    }
    return std::make_pair(flatten(refs), losses);
  };

  const auto [pa, la] = run(42);
  const auto [pb, lb] = run(42);
  CHECK(pa == pb);  // bit-identical parameters
  CHECK(la == lb);

  int monotone_seeds = 0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto [params_ignored, losses] = run(seed);
    bool strictly_decreasing = true;
    for (std::size_t i = 0; i + 1 < 50; ++i) {
      strictly_decreasing &= losses[i + 1] < losses[i];
    }
    monotone_seeds += strictly_decreasing ? 1 : 0;
  }
  CHECK(monotone_seeds >= 4);
}

TEST_CASE("two-layer lstm baseline") {
  SUBCASE("all-zero params emit the head bias") {
    LstmBaselineParams params(5, 4, 6);
    params.head.b = {1, 2, 3, 4, 5, 6};
    Array2D inputs(20, 5);
    const auto out = lstm_baseline_forward(params, inputs);
    REQUIRE(out.size() == 6);
    for (std::size_t i = 0; i < 6; ++i) {
      CHECK(out[i] == doctest::Approx(static_cast<double>(i + 1)));
    }
  }

  SUBCASE("feature mismatch is a shape error") {
    LstmBaselineParams params(5, 4, 6);
    Array2D inputs(20, 3);
    CHECK_THROWS_AS(lstm_baseline_forward(params, inputs), Error);
  }

  SUBCASE("gradients match finite differences") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      Rng rng(seed);
      LstmBaselineParams params(3, 4, 2);
      params.init(rng);
      Array2D inputs(5, 3);
      for (double& v : inputs.data) v = rng.uniform(0.0, 1.0);
      const auto target = random_vector(2, rng);

      LstmBaselineParams grads(3, 4, 2);
      lstm_baseline_forward_backward(params, inputs, target, grads);

      ParamRefs prefs, grefs;
      params.collect(prefs);
      grads.collect(grefs);
      auto flat = flatten(prefs);
      const auto analytic = flatten(grefs);
      const double err = grad_check(
          [&](std::span<const double> p) {
            unflatten(p, prefs);
            return loss_mse(lstm_baseline_forward(params, inputs), target).value;
          },
          flat, analytic, 1e-5);
      unflatten(flat, prefs);
      CHECK(err < 1e-4);
    }
  }
}

TEST_CASE("dilated causal conv hand case") {
  // single layer, kernel [1,1], dilation 2, one channel:
  // out_t = x_t + x_{t-2} with zero left padding
  Conv1DParams params(1, 1, 2, {2}, 1);
  params.layers[0].k(0, 0, 0) = 1.0;
  params.layers[0].k(0, 0, 1) = 1.0;

  Array2D inputs(4, 1);
  inputs.at(0, 0) = 1;
  inputs.at(1, 0) = 2;
  inputs.at(2, 0) = 3;
  inputs.at(3, 0) = 4;

  std::vector<Array2D> acts;
  conv1d_causal_forward(params, inputs, &acts);
  REQUIRE(acts.size() == 1);
  CHECK(acts[0].at(0, 0) == 1.0);
  CHECK(acts[0].at(1, 0) == 2.0);
  CHECK(acts[0].at(2, 0) == 4.0);
  CHECK(acts[0].at(3, 0) == 6.0);
}

TEST_CASE("conv parameter invariants") {
  CHECK_THROWS_AS(Conv1DParams(8, 4, 2, {1, 3}, 6), Error);   // not power of 2
  CHECK_THROWS_AS(Conv1DParams(8, 4, 2, {4, 2}, 6), Error);   // not increasing
  CHECK_THROWS_AS(Conv1DParams(8, 4, 2, {}, 6), Error);       // empty
  const Conv1DParams ok(8, 4, 2, {1, 2, 4, 8, 16, 32, 64, 128}, 6);
  CHECK(ok.receptive_field() == 256);
}

TEST_CASE("zero kernels give the head bias") {
  Conv1DParams params(2, 3, 2, {1, 2}, 4);
  params.head.b = {0.5, -0.5, 1.5, 0.0};
  Array2D inputs(10, 2);
  Rng rng(3);
  for (double& v : inputs.data) v = rng.uniform(0.0, 1.0);
  const auto out = conv1d_causal_forward(params, inputs, nullptr);
  REQUIRE(out.size() == 4);
  CHECK(out[0] == doctest::Approx(0.5));
  CHECK(out[1] == doctest::Approx(-0.5));
  CHECK(out[2] == doctest::Approx(1.5));
  CHECK(out[3] == doctest::Approx(0.0));
}

TEST_CASE("causality: future perturbations never reach past activations") {
  Conv1DParams params(2, 4, 2, {1, 2, 4, 8}, 3);
  Rng rng(13);
  params.init(rng);
  Array2D inputs(40, 2);
  for (double& v : inputs.data) v = rng.uniform(0.0, 1.0);

  std::vector<Array2D> base_acts;
  conv1d_causal_forward(params, inputs, &base_acts);

  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t t = rng.below(39);
    const std::size_t k = 1 + rng.below(39 - t);
    Array2D perturbed = inputs;
    perturbed.at(t + k, rng.below(2)) += rng.uniform(0.5, 2.0);

    std::vector<Array2D> acts;
    conv1d_causal_forward(params, perturbed, &acts);
    for (std::size_t layer = 0; layer < acts.size(); ++layer) {
      for (std::size_t pos = 0; pos <= t; ++pos) {
        for (std::size_t c = 0; c < acts[layer].cols; ++c) {
          // bit-identical, not approximately equal
          CHECK(acts[layer].at(pos, c) == base_acts[layer].at(pos, c));
        }
      }
    }
  }
}

TEST_CASE("conv gradients match finite differences") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Rng rng(seed);
    Conv1DParams params(2, 3, 2, {1, 2}, 2);
    params.init(rng);
    // keep pre-activations off the exact ReLU kink, where the subgradient
    // and a finite difference legitimately disagree
    for (auto& layer : params.layers) {
      for (double& b : layer.bias) b = rng.uniform(0.01, 0.05);
    }
    Array2D inputs(9, 2);
    for (double& v : inputs.data) v = rng.uniform(0.0, 1.0);
    const auto target = random_vector(2, rng);

    Conv1DParams grads(2, 3, 2, {1, 2}, 2);
    conv1d_forward_backward(params, inputs, target, grads);

    ParamRefs prefs, grefs;
    params.collect(prefs);
    grads.collect(grefs);
    auto flat = flatten(prefs);
    const auto analytic = flatten(grefs);
    const double err = grad_check(
        [&](std::span<const double> p) {
          unflatten(p, prefs);
          return loss_mse(conv1d_causal_forward(params, inputs, nullptr), target)
              .value;
        },
        flat, analytic, 1e-5);
    unflatten(flat, prefs);
    CHECK(err < 1e-4);
  }
}

TEST_CASE("reversed target is an involution") {
  Rng rng(21);
  const auto cfg = small_config(4, 3, 2, 2);
  const Window w = random_window(cfg, 10, rng);
  std::vector<double> twice(w.reversed_target.rbegin(), w.reversed_target.rend());
  for (std::size_t t = 0; t < 10; ++t) {
    CHECK(twice[t] == w.inputs.at(t, 0));
  }
}

TEST_SUITE_END();

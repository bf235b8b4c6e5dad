#include "slf/losses.hpp"

#include <cmath>

#include "slf/activations.hpp"

namespace slf {

LossWeights LossWeights::recency(std::size_t n) {
  LossWeights lw;
  lw.w.resize(n);
  for (std::size_t t = 1; t <= n; ++t) {
    lw.w[t - 1] = 2.0 * static_cast<double>(t) / static_cast<double>(n + 1);
  }
  return lw;
}

LossWeights LossWeights::uniform(std::size_t n) {
  LossWeights lw;
  lw.w.assign(n, 1.0);
  return lw;
}

LossWeights LossWeights::reversed() const {
  LossWeights lw;
  lw.w.assign(w.rbegin(), w.rend());
  return lw;
}

void LossWeights::validate() const {
  double sum = 0.0;
  for (double v : w) {
    require(v > 0.0, Status::InvalidArgument, "loss weights must be positive");
    sum += v;
  }
  require(!w.empty(), Status::InvalidArgument, "loss weights empty");
  const double mean = sum / static_cast<double>(w.size());
  require(std::abs(mean - 1.0) < 1e-12, Status::InvalidArgument,
          "loss weights must have mean 1");
}

LossResult loss_mse(std::span<const double> pred,
                    std::span<const double> target) {
  require(pred.size() == target.size(), Status::Shape,
          "loss_mse: length mismatch");
  require(!pred.empty(), Status::Shape, "loss_mse: empty input");
  const double inv = 1.0 / static_cast<double>(pred.size());
  LossResult r;
  r.grad.resize(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - target[i];
    r.value += d * d * inv;
    r.grad[i] = 2.0 * d * inv;
  }
  return r;
}

LossResult loss_weighted_mse(std::span<const double> pred,
                             std::span<const double> target,
                             const LossWeights& weights) {
  require(pred.size() == target.size() && pred.size() == weights.w.size(),
          Status::Shape, "loss_weighted_mse: length mismatch");
  for (double v : weights.w) {
    require(v > 0.0, Status::InvalidArgument,
            "loss_weighted_mse: non-positive weight");
  }
  const double inv = 1.0 / static_cast<double>(pred.size());
  LossResult r;
  r.grad.resize(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double d = pred[i] - target[i];
    r.value += weights.w[i] * d * d * inv;
    r.grad[i] = 2.0 * weights.w[i] * d * inv;
  }
  return r;
}

LossResult loss_cross_entropy(std::span<const double> logits,
                              std::size_t label) {
  require(label < logits.size(), Status::InvalidArgument,
          "loss_cross_entropy: label out of range");
  std::vector<double> probs = softmax(logits);
  LossResult r;
  // -log p[label], floored against exact-zero probability underflow.
  r.value = -std::log(std::max(probs[label], 1e-300));
  r.grad = std::move(probs);
  r.grad[label] -= 1.0;
  return r;
}

}  // namespace slf

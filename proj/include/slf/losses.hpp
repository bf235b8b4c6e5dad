#pragma once

#include <span>
#include <vector>

#include "slf/error.hpp"

namespace slf {

struct LossResult {
  double value = 0.0;
  std::vector<double> grad;  // d value / d pred (or d logits)
};

// Per-step weights for the weighted reconstruction loss. Positive, mean 1.
struct LossWeights {
  std::vector<double> w;

  // w_t = 2t/(n+1) for t = 1..n, ascending: t = n (the most recent input
  // step) carries the largest weight. Mean is exactly 1.
  static LossWeights recency(std::size_t n);

  static LossWeights uniform(std::size_t n);

  // Same weights aligned with a most-recent-first sequence.
  LossWeights reversed() const;

  void validate() const;
};

// (1/m) sum (pred_i - target_i)^2
LossResult loss_mse(std::span<const double> pred, std::span<const double> target);

// (1/n) sum w_t (pred_t - target_t)^2
LossResult loss_weighted_mse(std::span<const double> pred,
                             std::span<const double> target,
                             const LossWeights& weights);

// -log softmax(logits)[label]; grad = softmax(logits) - one_hot(label)
LossResult loss_cross_entropy(std::span<const double> logits, std::size_t label);

}  // namespace slf

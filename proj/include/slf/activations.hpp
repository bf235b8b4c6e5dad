#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "slf/array.hpp"
#include "slf/error.hpp"

namespace slf {

enum class Activation { Sigmoid, Tanh, Relu };

inline double sigmoid(double x) {
  // Split on sign so exp never overflows.
  if (x >= 0.0) {
    return 1.0 / (1.0 + std::exp(-x));
  }
  double e = std::exp(x);
  return e / (1.0 + e);
}

std::vector<double> elementwise_activation(Activation kind,
                                           std::span<const double> x);

// Shift-stable softmax: subtracts max before exponentiating.
std::vector<double> softmax(std::span<const double> z);

// y = W x + b
std::vector<double> affine_forward(const Array2D& weights,
                                   std::span<const double> bias,
                                   std::span<const double> x);

}  // namespace slf

#include "slf/activations.hpp"

#include <algorithm>

namespace slf {

std::vector<double> elementwise_activation(Activation kind,
                                           std::span<const double> x) {
  check_finite(x, "elementwise_activation input");
  std::vector<double> out(x.size());
  switch (kind) {
    case Activation::Sigmoid:
      for (std::size_t i = 0; i < x.size(); ++i) out[i] = sigmoid(x[i]);
      break;
    case Activation::Tanh:
      for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::tanh(x[i]);
      break;
    case Activation::Relu:
      for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] > 0.0 ? x[i] : 0.0;
      break;
  }
  return out;
}

std::vector<double> softmax(std::span<const double> z) {
  require(!z.empty(), Status::InvalidArgument, "softmax: empty input");
  check_finite(z, "softmax input");
  const double zmax = *std::max_element(z.begin(), z.end());
  std::vector<double> out(z.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    out[i] = std::exp(z[i] - zmax);
    sum += out[i];
  }
  for (double& v : out) v /= sum;
  return out;
}

std::vector<double> affine_forward(const Array2D& weights,
                                   std::span<const double> bias,
                                   std::span<const double> x) {
  require(weights.cols == x.size(), Status::Shape,
          "affine_forward: weight cols != input length");
  require(weights.rows == bias.size(), Status::Shape,
          "affine_forward: weight rows != bias length");
  std::vector<double> y(weights.rows);
  matvec(weights, x.data(), y.data());
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += bias[i];
  return y;
}

}  // namespace slf

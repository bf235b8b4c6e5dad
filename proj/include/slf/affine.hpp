#pragma once

#include <span>
#include <string>
#include <vector>

#include "slf/adam.hpp"
#include "slf/array.hpp"
#include "slf/rng.hpp"

namespace slf {

// y = W x + b output head.
struct AffineParams {
  Array2D w;               // out x in
  std::vector<double> b;   // out

  AffineParams() = default;
  AffineParams(std::size_t in, std::size_t out) : w(out, in), b(out, 0.0) {}

  std::size_t in_size() const { return w.cols; }
  std::size_t out_size() const { return w.rows; }

  void init(Rng& rng);
  void collect(const std::string& prefix, ParamRefs& out);

  std::vector<double> forward(std::span<const double> x) const;

  // Accumulates weight/bias grads, overwrites grad_x.
  void backward(std::span<const double> x, std::span<const double> grad_y,
                AffineParams& grads, std::span<double> grad_x) const;
};

}  // namespace slf

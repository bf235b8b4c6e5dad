#include "slf/affine.hpp"

#include <cmath>

#include "slf/activations.hpp"

namespace slf {

void AffineParams::init(Rng& rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(w.cols));
  for (double& v : w.data) v = rng.uniform(-bound, bound);
  std::fill(b.begin(), b.end(), 0.0);
}

void AffineParams::collect(const std::string& prefix, ParamRefs& out) {
  out.push_back({prefix + "W", w.rows, w.cols, w.data.data()});
  out.push_back({prefix + "b", b.size(), 1, b.data()});
}

std::vector<double> AffineParams::forward(std::span<const double> x) const {
  return affine_forward(w, b, x);
}

void AffineParams::backward(std::span<const double> x,
                            std::span<const double> grad_y, AffineParams& grads,
                            std::span<double> grad_x) const {
  require(grad_y.size() == w.rows && x.size() == w.cols &&
              grad_x.size() == w.cols,
          Status::Shape, "affine backward: size mismatch");
  outer_acc(grads.w, grad_y.data(), x.data());
  for (std::size_t i = 0; i < grad_y.size(); ++i) grads.b[i] += grad_y[i];
  std::fill(grad_x.begin(), grad_x.end(), 0.0);
  matvec_t_acc(w, grad_y.data(), grad_x.data());
}

}  // namespace slf

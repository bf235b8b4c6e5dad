#pragma once

#include <functional>
#include <span>

namespace slf {

// Central finite-difference check. f must be pure and deterministic over the
// parameter view; params are perturbed in place and restored. Returns the max
// over components of |analytic - central| / max(1e-8, |analytic| + |central|).
double grad_check(const std::function<double(std::span<const double>)>& f,
                  std::span<double> params, std::span<const double> analytic,
                  double step);

}  // namespace slf

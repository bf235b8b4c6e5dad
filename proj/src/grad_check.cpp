#include "slf/grad_check.hpp"

#include <algorithm>
#include <cmath>

#include "slf/error.hpp"

namespace slf {

double grad_check(const std::function<double(std::span<const double>)>& f,
                  std::span<double> params, std::span<const double> analytic,
                  double step) {
  require(step > 0.0, Status::InvalidArgument, "grad_check: step must be > 0");
  require(params.size() == analytic.size(), Status::Shape,
          "grad_check: gradient length mismatch");
  double worst = 0.0;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double saved = params[i];
    params[i] = saved + step;
    const double f_plus = f(params);
    params[i] = saved - step;
    const double f_minus = f(params);
    params[i] = saved;
    if (!std::isfinite(f_plus) || !std::isfinite(f_minus)) {
      fail(Status::InvalidArgument, "grad_check: non-finite function value");
    }
    const double central = (f_plus - f_minus) / (2.0 * step);
    const double denom =
        std::max(1e-8, std::abs(analytic[i]) + std::abs(central));
    worst = std::max(worst, std::abs(analytic[i] - central) / denom);
  }
  return worst;
}

}  // namespace slf

#include "slf/adam.hpp"

#include <cmath>

namespace slf {

std::size_t total_len(const ParamRefs& refs) {
  std::size_t n = 0;
  for (const ParamRef& r : refs) n += r.len();
  return n;
}

AdamState::AdamState(std::size_t n, const AdamConfig& cfg)
    : lr(cfg.lr), beta1(cfg.beta1), beta2(cfg.beta2), eps(cfg.eps),
      m(n, 0.0), v(n, 0.0) {
  require(beta1 >= 0.0 && beta1 < 1.0 && beta2 >= 0.0 && beta2 < 1.0,
          Status::InvalidArgument, "adam betas must lie in [0,1)");
}

void adam_step(AdamState& state, std::span<double> params,
               std::span<const double> grads) {
  require(params.size() == grads.size() && params.size() == state.m.size() &&
              params.size() == state.v.size(),
          Status::Shape, "adam_step: size mismatch");
  state.step += 1;
  const double t = static_cast<double>(state.step);
  const double bc1 = 1.0 - std::pow(state.beta1, t);
  const double bc2 = 1.0 - std::pow(state.beta2, t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * g;
    state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * g * g;
    const double mhat = state.m[i] / bc1;
    const double vhat = state.v[i] / bc2;
    params[i] -= state.lr * mhat / (std::sqrt(vhat) + state.eps);
  }
}

void adam_step(AdamState& state, const ParamRefs& params, const ParamRefs& grads) {
  require(params.size() == grads.size(), Status::Shape,
          "adam_step: param/grad list mismatch");
  require(total_len(params) == state.m.size(), Status::Shape,
          "adam_step: state sized for a different parameter set");
  std::size_t offset = 0;
  state.step += 1;
  const double t = static_cast<double>(state.step);
  const double bc1 = 1.0 - std::pow(state.beta1, t);
  const double bc2 = 1.0 - std::pow(state.beta2, t);
  for (std::size_t a = 0; a < params.size(); ++a) {
    require(params[a].len() == grads[a].len(), Status::Shape,
            "adam_step: array length mismatch at " + params[a].name);
    double* p = params[a].data;
    const double* g = grads[a].data;
    const std::size_t n = params[a].len();
    for (std::size_t i = 0; i < n; ++i) {
      double& mi = state.m[offset + i];
      double& vi = state.v[offset + i];
      mi = state.beta1 * mi + (1.0 - state.beta1) * g[i];
      vi = state.beta2 * vi + (1.0 - state.beta2) * g[i] * g[i];
      p[i] -= state.lr * (mi / bc1) / (std::sqrt(vi / bc2) + state.eps);
    }
    offset += n;
  }
}

double global_norm(const ParamRefs& grads) {
  double sq = 0.0;
  for (const ParamRef& r : grads) {
    for (std::size_t i = 0; i < r.len(); ++i) sq += r.data[i] * r.data[i];
  }
  return std::sqrt(sq);
}

void clip_global_norm(const ParamRefs& grads, double max_norm) {
  const double norm = global_norm(grads);
  if (norm <= max_norm || norm == 0.0) return;
  const double scale = max_norm / norm;
  for (const ParamRef& r : grads) {
    for (std::size_t i = 0; i < r.len(); ++i) r.data[i] *= scale;
  }
}

void zero_params(const ParamRefs& refs) {
  for (const ParamRef& r : refs) {
    std::fill(r.data, r.data + r.len(), 0.0);
  }
}

void scale_params(const ParamRefs& refs, double factor) {
  for (const ParamRef& r : refs) {
    for (std::size_t i = 0; i < r.len(); ++i) r.data[i] *= factor;
  }
}

}  // namespace slf

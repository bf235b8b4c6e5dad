#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "slf/error.hpp"

namespace slf {

// One named parameter array of a model. Vectors are rows x 1. The enumeration
// order produced by each model's collect() is the canonical order for the
// optimizer state and the persistence manifest.
struct ParamRef {
  std::string name;
  std::size_t rows = 0;
  std::size_t cols = 0;
  double* data = nullptr;

  std::size_t len() const { return rows * cols; }
};

using ParamRefs = std::vector<ParamRef>;

std::size_t total_len(const ParamRefs& refs);

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  std::int64_t step = 0;
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::vector<double> m;  // first moment, flat over the param list
  std::vector<double> v;  // second moment

  AdamState() = default;
  AdamState(std::size_t n, const AdamConfig& cfg);
};

// Standard bias-corrected Adam update over a flat view.
void adam_step(AdamState& state, std::span<double> params,
               std::span<const double> grads);

// Structured variant: params and grads must enumerate matching arrays.
void adam_step(AdamState& state, const ParamRefs& params, const ParamRefs& grads);

double global_norm(const ParamRefs& grads);

// Scales all gradients so their global L2 norm is at most max_norm.
void clip_global_norm(const ParamRefs& grads, double max_norm);

void zero_params(const ParamRefs& refs);

void scale_params(const ParamRefs& refs, double factor);

}  // namespace slf

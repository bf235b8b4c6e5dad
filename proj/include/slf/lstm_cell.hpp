#pragma once

#include <span>
#include <string>
#include <vector>

#include "slf/adam.hpp"
#include "slf/array.hpp"
#include "slf/rng.hpp"

namespace slf {

// Gate parameters of a single LSTM cell. Gate order everywhere is i, f, g, o.
struct LstmCellParams {
  std::size_t input_size = 0;
  std::size_t hidden_size = 0;
  Array2D w_ii, w_if, w_ig, w_io;  // hidden x input
  Array2D w_hi, w_hf, w_hg, w_ho;  // hidden x hidden
  std::vector<double> b_i, b_f, b_g, b_o;

  LstmCellParams() = default;
  LstmCellParams(std::size_t input, std::size_t hidden);

  // Scaled uniform init in [-1/sqrt(fan_in), +1/sqrt(fan_in)]; forget-gate
  // bias starts at +1, the other biases at 0.
  void init(Rng& rng);

  void collect(const std::string& prefix, ParamRefs& out);
};

// Gradients share the parameter layout.
using LstmCellGrads = LstmCellParams;

struct LstmCellState {
  std::vector<double> h;
  std::vector<double> c;

  LstmCellState() = default;
  explicit LstmCellState(std::size_t hidden) : h(hidden, 0.0), c(hidden, 0.0) {}
};

// Everything the backward pass needs from one forward step.
struct LstmCellCache {
  std::vector<double> x, h_prev, c_prev;
  std::vector<double> i, f, g, o, c_new, tanh_c_new;
};

// i = sigmoid(W_ii x + W_hi h + b_i)     f, o analogous
// g = tanh(W_ig x + W_hg h + b_g)
// c' = f.c + i.g       h' = o.tanh(c')
LstmCellState lstm_cell_forward(const LstmCellParams& params,
                                std::span<const double> x,
                                const LstmCellState& prev,
                                LstmCellCache* cache);

// Analytic gradients for one step. Parameter gradients are accumulated into
// grads; grad_x / grad_h_prev / grad_c_prev are overwritten.
void lstm_cell_backward(const LstmCellParams& params, const LstmCellCache& cache,
                        std::span<const double> grad_h,
                        std::span<const double> grad_c, LstmCellGrads& grads,
                        std::span<double> grad_x, std::span<double> grad_h_prev,
                        std::span<double> grad_c_prev);

}  // namespace slf

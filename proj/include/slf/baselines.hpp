#pragma once

#include <vector>

#include "slf/affine.hpp"
#include "slf/lstm_cell.hpp"

namespace slf {

// Two stacked LSTM layers with an affine head mapping the final layer-2
// hidden state to all m forecast steps at once. Unlike the seq2seq model this
// baseline is told the appliance type: its per-step features carry the
// appliance one-hot appended after power and day-of-week.
struct LstmBaselineParams {
  std::size_t input_features = 0;
  std::size_t hidden = 0;
  std::size_t horizon = 0;
  LstmCellParams layer1;  // input_features -> hidden
  LstmCellParams layer2;  // hidden -> hidden
  AffineParams head;      // hidden -> horizon

  LstmBaselineParams() = default;
  LstmBaselineParams(std::size_t input_features, std::size_t hidden,
                     std::size_t horizon);

  void init(Rng& rng);
  void collect(ParamRefs& out);
};

std::vector<double> lstm_baseline_forward(const LstmBaselineParams& params,
                                          const Array2D& inputs);

// MSE against target; gradients accumulated into grads. Returns the loss.
double lstm_baseline_forward_backward(const LstmBaselineParams& params,
                                      const Array2D& inputs,
                                      std::span<const double> target,
                                      LstmBaselineParams& grads);

// Stacked dilated causal convolutions, kernel width 2 by default, ReLU after
// every conv layer, and an affine head over the last time step's channels.
// Zero left-padding keeps every output strictly causal.
struct Conv1DLayer {
  std::size_t in_channels = 0;
  std::size_t out_channels = 0;
  std::size_t kernel_width = 0;
  std::size_t dilation = 1;
  Array2D kernel;             // out_channels x (in_channels * kernel_width)
  std::vector<double> bias;   // out_channels

  Conv1DLayer() = default;
  Conv1DLayer(std::size_t in_ch, std::size_t out_ch, std::size_t kw,
              std::size_t dilation);

  double& k(std::size_t co, std::size_t ci, std::size_t tap) {
    return kernel.at(co, ci * kernel_width + tap);
  }
  double k(std::size_t co, std::size_t ci, std::size_t tap) const {
    return kernel.at(co, ci * kernel_width + tap);
  }
};

struct Conv1DParams {
  std::size_t input_features = 0;
  std::size_t channels = 0;
  std::size_t kernel_width = 2;
  std::size_t horizon = 0;
  std::vector<std::size_t> dilations;  // strictly increasing powers of two
  std::vector<Conv1DLayer> layers;
  AffineParams head;  // channels -> horizon

  Conv1DParams() = default;
  Conv1DParams(std::size_t input_features, std::size_t channels,
               std::size_t kernel_width, std::vector<std::size_t> dilations,
               std::size_t horizon);

  void init(Rng& rng);
  void collect(ParamRefs& out);

  // 1 + (kernel_width - 1) * sum(dilations)
  std::size_t receptive_field() const;
};

// out[t] = sum_k w[.,.,k] * x[t - (kw-1-k)*dilation], zero left-padded.
// If activations is given it receives each layer's post-ReLU output
// (n x out_channels per layer).
std::vector<double> conv1d_causal_forward(const Conv1DParams& params,
                                          const Array2D& inputs,
                                          std::vector<Array2D>* activations);

double conv1d_forward_backward(const Conv1DParams& params, const Array2D& inputs,
                               std::span<const double> target,
                               Conv1DParams& grads);

}  // namespace slf

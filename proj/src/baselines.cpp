#include "slf/baselines.hpp"

#include <cmath>

#include "slf/losses.hpp"

namespace slf {

LstmBaselineParams::LstmBaselineParams(std::size_t input_features_,
                                       std::size_t hidden_, std::size_t horizon_)
    : input_features(input_features_), hidden(hidden_), horizon(horizon_),
      layer1(input_features_, hidden_), layer2(hidden_, hidden_),
      head(hidden_, horizon_) {}

void LstmBaselineParams::init(Rng& rng) {
  layer1.init(rng);
  layer2.init(rng);
  head.init(rng);
}

void LstmBaselineParams::collect(ParamRefs& out) {
  layer1.collect("layer1.", out);
  layer2.collect("layer2.", out);
  head.collect("head.", out);
}

std::vector<double> lstm_baseline_forward(const LstmBaselineParams& params,
                                          const Array2D& inputs) {
  require(inputs.cols == params.input_features, Status::Shape,
          "lstm_baseline_forward: feature dimension mismatch");
  check_finite(inputs.data, "lstm baseline inputs");
  LstmCellState s1(params.hidden), s2(params.hidden);
  for (std::size_t t = 0; t < inputs.rows; ++t) {
    std::span<const double> x(inputs.row(t), inputs.cols);
    s1 = lstm_cell_forward(params.layer1, x, s1, nullptr);
    s2 = lstm_cell_forward(params.layer2, s1.h, s2, nullptr);
  }
  return params.head.forward(s2.h);
}

double lstm_baseline_forward_backward(const LstmBaselineParams& params,
                                      const Array2D& inputs,
                                      std::span<const double> target,
                                      LstmBaselineParams& grads) {
  require(inputs.cols == params.input_features, Status::Shape,
          "lstm baseline: feature dimension mismatch");
  const std::size_t n = inputs.rows;
  const std::size_t hidden = params.hidden;

  std::vector<LstmCellCache> cache1(n), cache2(n);
  std::vector<std::vector<double>> h1(n);
  LstmCellState s1(hidden), s2(hidden);
  for (std::size_t t = 0; t < n; ++t) {
    std::span<const double> x(inputs.row(t), inputs.cols);
    s1 = lstm_cell_forward(params.layer1, x, s1, &cache1[t]);
    h1[t] = s1.h;
    s2 = lstm_cell_forward(params.layer2, s1.h, s2, &cache2[t]);
  }
  const std::vector<double> pred = params.head.forward(s2.h);
  LossResult loss = loss_mse(pred, target);

  std::vector<double> gh2(hidden, 0.0), gc2(hidden, 0.0);
  params.head.backward(s2.h, loss.grad, grads.head, gh2);

  // Layer-2 BPTT; each step hands its input gradient down to layer 1.
  std::vector<double> gh1(hidden, 0.0), gc1(hidden, 0.0);
  std::vector<double> gh2_prev(hidden), gc2_prev(hidden);
  std::vector<double> gh1_prev(hidden), gc1_prev(hidden);
  std::vector<double> gx1(hidden), gx0(params.input_features);
  for (std::size_t t = n; t-- > 0;) {
    lstm_cell_backward(params.layer2, cache2[t], gh2, gc2, grads.layer2, gx1,
                       gh2_prev, gc2_prev);
    for (std::size_t j = 0; j < hidden; ++j) gh1[j] += gx1[j];
    lstm_cell_backward(params.layer1, cache1[t], gh1, gc1, grads.layer1, gx0,
                       gh1_prev, gc1_prev);
    gh2 = gh2_prev;
    gc2 = gc2_prev;
    gh1 = gh1_prev;
    gc1 = gc1_prev;
  }
  return loss.value;
}

Conv1DLayer::Conv1DLayer(std::size_t in_ch, std::size_t out_ch, std::size_t kw,
                         std::size_t dilation_)
    : in_channels(in_ch), out_channels(out_ch), kernel_width(kw),
      dilation(dilation_), kernel(out_ch, in_ch * kw), bias(out_ch, 0.0) {}

Conv1DParams::Conv1DParams(std::size_t input_features_, std::size_t channels_,
                           std::size_t kernel_width_,
                           std::vector<std::size_t> dilations_,
                           std::size_t horizon_)
    : input_features(input_features_), channels(channels_),
      kernel_width(kernel_width_), horizon(horizon_),
      dilations(std::move(dilations_)) {
  require(!dilations.empty(), Status::InvalidArgument,
          "conv1d: at least one layer required");
  for (std::size_t l = 0; l < dilations.size(); ++l) {
    const std::size_t d = dilations[l];
    require(d > 0 && (d & (d - 1)) == 0, Status::InvalidArgument,
            "conv1d: dilations must be powers of two");
    require(l == 0 || d > dilations[l - 1], Status::InvalidArgument,
            "conv1d: dilations must be strictly increasing");
    layers.emplace_back(l == 0 ? input_features : channels, channels,
                        kernel_width, d);
  }
  head = AffineParams(channels, horizon);
}

void Conv1DParams::init(Rng& rng) {
  for (Conv1DLayer& layer : layers) {
    const double bound =
        1.0 / std::sqrt(static_cast<double>(layer.in_channels * layer.kernel_width));
    for (double& v : layer.kernel.data) v = rng.uniform(-bound, bound);
    std::fill(layer.bias.begin(), layer.bias.end(), 0.0);
  }
  head.init(rng);
}

void Conv1DParams::collect(ParamRefs& out) {
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const std::string prefix = "conv" + std::to_string(l) + ".";
    out.push_back({prefix + "kernel", layers[l].kernel.rows,
                   layers[l].kernel.cols, layers[l].kernel.data.data()});
    out.push_back({prefix + "bias", layers[l].bias.size(), 1,
                   layers[l].bias.data()});
  }
  head.collect("head.", out);
}

std::size_t Conv1DParams::receptive_field() const {
  std::size_t sum = 0;
  for (std::size_t d : dilations) sum += d;
  return 1 + (kernel_width - 1) * sum;
}

namespace {

// out[t, co] = bias[co] + sum_{ci,k} w[co,ci,k] * in[t - (kw-1-k)*d, ci]
void conv_layer_forward(const Conv1DLayer& layer, const Array2D& in,
                        Array2D& out, bool relu) {
  const std::size_t n = in.rows;
  const std::size_t kw = layer.kernel_width;
  const std::size_t d = layer.dilation;
  for (std::size_t t = 0; t < n; ++t) {
    double* orow = out.row(t);
    for (std::size_t co = 0; co < layer.out_channels; ++co) {
      double acc = layer.bias[co];
      for (std::size_t k = 0; k < kw; ++k) {
        const std::size_t back = (kw - 1 - k) * d;
        if (back > t) continue;  // zero left-padding
        const double* irow = in.row(t - back);
        for (std::size_t ci = 0; ci < layer.in_channels; ++ci) {
          acc += layer.k(co, ci, k) * irow[ci];
        }
      }
      orow[co] = relu && acc < 0.0 ? 0.0 : acc;
    }
  }
}

void conv_layer_backward(const Conv1DLayer& layer, const Array2D& in,
                         const Array2D& post_relu, const Array2D& grad_out,
                         Conv1DLayer& grads, Array2D* grad_in) {
  const std::size_t n = in.rows;
  const std::size_t kw = layer.kernel_width;
  const std::size_t d = layer.dilation;
  for (std::size_t t = 0; t < n; ++t) {
    const double* grow = grad_out.row(t);
    const double* arow = post_relu.row(t);
    for (std::size_t co = 0; co < layer.out_channels; ++co) {
      double g = grow[co];
      if (g == 0.0) continue;
      if (arow[co] <= 0.0) continue;  // ReLU gate (post_relu==0 => pre <= 0)
      grads.bias[co] += g;
      for (std::size_t k = 0; k < kw; ++k) {
        const std::size_t back = (kw - 1 - k) * d;
        if (back > t) continue;
        const double* irow = in.row(t - back);
        double* girow = grad_in ? grad_in->row(t - back) : nullptr;
        for (std::size_t ci = 0; ci < layer.in_channels; ++ci) {
          grads.k(co, ci, k) += g * irow[ci];
          if (girow) girow[ci] += g * layer.k(co, ci, k);
        }
      }
    }
  }
}

}  // namespace

std::vector<double> conv1d_causal_forward(const Conv1DParams& params,
                                          const Array2D& inputs,
                                          std::vector<Array2D>* activations) {
  require(inputs.cols == params.input_features, Status::Shape,
          "conv1d: feature dimension mismatch");
  require(inputs.rows >= 1, Status::Shape, "conv1d: empty input");
  check_finite(inputs.data, "conv1d inputs");
  const std::size_t n = inputs.rows;
  std::vector<Array2D> local;
  std::vector<Array2D>& acts = activations ? *activations : local;
  acts.clear();
  acts.reserve(params.layers.size());
  const Array2D* current = &inputs;
  for (const Conv1DLayer& layer : params.layers) {
    Array2D next(n, layer.out_channels);
    conv_layer_forward(layer, *current, next, true);
    acts.push_back(std::move(next));
    current = &acts.back();
  }
  return params.head.forward(
      std::span<const double>(current->row(n - 1), current->cols));
}

double conv1d_forward_backward(const Conv1DParams& params, const Array2D& inputs,
                               std::span<const double> target,
                               Conv1DParams& grads) {
  std::vector<Array2D> acts;
  const std::vector<double> pred = conv1d_causal_forward(params, inputs, &acts);
  LossResult loss = loss_mse(pred, target);

  const std::size_t n = inputs.rows;
  const Array2D& last = acts.back();
  std::vector<double> grad_last_row(last.cols);
  params.head.backward(std::span<const double>(last.row(n - 1), last.cols),
                       loss.grad, grads.head, grad_last_row);

  Array2D grad_out(n, last.cols);
  for (std::size_t c = 0; c < last.cols; ++c) {
    grad_out.at(n - 1, c) = grad_last_row[c];
  }
  for (std::size_t l = params.layers.size(); l-- > 0;) {
    const Array2D& in = l == 0 ? inputs : acts[l - 1];
    Array2D grad_in(in.rows, in.cols);
    conv_layer_backward(params.layers[l], in, acts[l], grad_out,
                        grads.layers[l], l == 0 ? nullptr : &grad_in);
    grad_out = std::move(grad_in);
  }
  return loss.value;
}

}  // namespace slf

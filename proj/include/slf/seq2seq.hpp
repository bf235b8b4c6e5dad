#pragma once

#include <optional>
#include <span>
#include <vector>

#include "slf/affine.hpp"
#include "slf/losses.hpp"
#include "slf/lstm_cell.hpp"
#include "slf/window.hpp"

namespace slf {

struct Seq2SeqConfig {
  std::size_t input_features = 8;  // power + day-of-week one-hot
  std::size_t hidden = 64;
  std::size_t horizon = 6;
  std::size_t num_classes = 1;
  double lambda_dec = 1.0;
  double lambda_cls = 0.2;
};

// Fixed-length summary of the input sequence: the encoder's final hidden
// state. Seeds the decoder and generator hidden states and feeds the
// appliance classifier.
struct LatentCode {
  std::vector<double> z;
};

// Encoder/decoder/generator triple with a softmax appliance head.
// The decoder replays the input power sequence in reverse; the generator
// emits the hour-ahead forecast. Both consume one scalar per step.
struct Seq2SeqParams {
  Seq2SeqConfig cfg;
  LstmCellParams encoder;     // input_features -> hidden
  LstmCellParams decoder;     // 1 -> hidden
  AffineParams decoder_out;   // hidden -> 1
  LstmCellParams generator;   // 1 -> hidden
  AffineParams generator_out; // hidden -> 1
  AffineParams classifier;    // hidden -> num_classes

  Seq2SeqParams() = default;
  explicit Seq2SeqParams(const Seq2SeqConfig& cfg);

  void init(Rng& rng);
  void collect(ParamRefs& out);
};

using Seq2SeqGrads = Seq2SeqParams;

struct Seq2SeqLossBreakdown {
  double gen_loss = 0.0;  // forecast MSE
  double dec_loss = 0.0;  // weighted reconstruction MSE
  double cls_loss = 0.0;  // appliance cross entropy
  double total = 0.0;     // gen + lambda_dec*dec + lambda_cls*cls
};

// Z = final hidden state after running the encoder over all input rows.
LatentCode encode(const Seq2SeqParams& params, const Array2D& inputs);

// Emits x'_n..x'_1. With a teacher, each step consumes the ground-truth
// previous value; without one it consumes its own previous output. The first
// step consumes a zero token. n must be given when no teacher is.
std::vector<double> decode_reconstruct(const Seq2SeqParams& params,
                                       const LatentCode& z, std::size_t n,
                                       const std::vector<double>* teacher);

std::vector<double> classify_appliance(const Seq2SeqParams& params,
                                       const LatentCode& z);

// m forecast steps; the first step consumes the last observed power value,
// later steps consume teacher values (training) or their own output.
std::vector<double> generate_forecast(const Seq2SeqParams& params,
                                      const LatentCode& z, double last_observed,
                                      const std::vector<double>* teacher);

// Teacher-forced forward pass over one window; loss terms only.
Seq2SeqLossBreakdown seq2seq_loss(const Seq2SeqParams& params,
                                  const Window& window,
                                  const LossWeights& weights);

// Teacher-forced forward + backward through all three heads into the shared
// encoder. Gradients are accumulated into grads.
Seq2SeqLossBreakdown seq2seq_forward_backward(const Seq2SeqParams& params,
                                              const Window& window,
                                              const LossWeights& weights,
                                              Seq2SeqGrads& grads);

// One full training step on a single window: forward, backward, gradient
// clip, Adam update. Returns the losses measured before the update.
Seq2SeqLossBreakdown seq2seq_train_step(Seq2SeqParams& params,
                                        const Window& window,
                                        const LossWeights& weights,
                                        AdamState& opt, double clip_norm);

}  // namespace slf

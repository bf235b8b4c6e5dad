#include "slf/seq2seq.hpp"

#include <cmath>

#include "slf/activations.hpp"

namespace slf {

Seq2SeqParams::Seq2SeqParams(const Seq2SeqConfig& config)
    : cfg(config),
      encoder(config.input_features, config.hidden),
      decoder(1, config.hidden),
      decoder_out(config.hidden, 1),
      generator(1, config.hidden),
      generator_out(config.hidden, 1),
      classifier(config.hidden, config.num_classes) {
  require(config.hidden > 0 && config.num_classes >= 1, Status::InvalidArgument,
          "seq2seq config: hidden and num_classes must be positive");
}

void Seq2SeqParams::init(Rng& rng) {
  encoder.init(rng);
  decoder.init(rng);
  decoder_out.init(rng);
  generator.init(rng);
  generator_out.init(rng);
  classifier.init(rng);
}

void Seq2SeqParams::collect(ParamRefs& out) {
  encoder.collect("encoder.", out);
  decoder.collect("decoder.", out);
  decoder_out.collect("decoder_out.", out);
  generator.collect("generator.", out);
  generator_out.collect("generator_out.", out);
  classifier.collect("classifier.", out);
}

namespace {

struct EncodeTrace {
  std::vector<LstmCellCache> caches;
  LstmCellState final_state;
};

EncodeTrace encode_with_trace(const Seq2SeqParams& params, const Array2D& inputs,
                              bool keep_caches) {
  require(inputs.rows >= 1, Status::Shape, "encode: empty input sequence");
  require(inputs.cols == params.encoder.input_size, Status::Shape,
          "encode: feature dimension mismatch");
  check_finite(inputs.data, "encode inputs");
  EncodeTrace trace;
  if (keep_caches) trace.caches.resize(inputs.rows);
  LstmCellState state(params.cfg.hidden);
  for (std::size_t t = 0; t < inputs.rows; ++t) {
    std::span<const double> x(inputs.row(t), inputs.cols);
    state = lstm_cell_forward(params.encoder, x, state,
                              keep_caches ? &trace.caches[t] : nullptr);
  }
  trace.final_state = std::move(state);
  return trace;
}

// Shared scalar-input unroll for the decoder and generator modules; initial
// hidden state is Z, initial cell state zero.
struct ScalarUnrollTrace {
  std::vector<LstmCellCache> caches;
  std::vector<std::vector<double>> hidden;  // h_t per step
  std::vector<double> outputs;
};

ScalarUnrollTrace scalar_unroll(const LstmCellParams& cell,
                                const AffineParams& head,
                                const LatentCode& z, double first_input,
                                std::size_t steps,
                                const std::vector<double>* teacher,
                                bool keep_caches) {
  ScalarUnrollTrace trace;
  if (keep_caches) {
    trace.caches.resize(steps);
    trace.hidden.resize(steps);
  }
  trace.outputs.resize(steps);
  LstmCellState state(cell.hidden_size);
  state.h = z.z;
  double prev_value = first_input;
  for (std::size_t t = 0; t < steps; ++t) {
    const double input = t == 0 ? first_input
                        : teacher ? (*teacher)[t - 1]
                                  : prev_value;
    state = lstm_cell_forward(cell, std::span<const double>(&input, 1), state,
                              keep_caches ? &trace.caches[t] : nullptr);
    const std::vector<double> y = head.forward(state.h);
    trace.outputs[t] = y[0];
    prev_value = y[0];
    if (keep_caches) trace.hidden[t] = state.h;
  }
  return trace;
}

// BPTT mirror of scalar_unroll under teacher forcing (each step's input is
// data, so no gradient flows through the input chain). Returns dL/dZ.
std::vector<double> scalar_unroll_backward(
    const LstmCellParams& cell, const AffineParams& head,
    const ScalarUnrollTrace& trace, std::span<const double> grad_outputs,
    LstmCellGrads& cell_grads, AffineParams& head_grads) {
  const std::size_t hidden = cell.hidden_size;
  const std::size_t steps = trace.outputs.size();
  std::vector<double> grad_h(hidden, 0.0), grad_c(hidden, 0.0);
  std::vector<double> grad_h_prev(hidden), grad_c_prev(hidden);
  std::vector<double> grad_x(1), grad_head_in(hidden);
  for (std::size_t t = steps; t-- > 0;) {
    const double gy = grad_outputs[t];
    const std::span<const double> gy_span(&gy, 1);
    head.backward(trace.hidden[t], gy_span, head_grads, grad_head_in);
    for (std::size_t j = 0; j < hidden; ++j) grad_h[j] += grad_head_in[j];
    lstm_cell_backward(cell, trace.caches[t], grad_h, grad_c, cell_grads,
                       grad_x, grad_h_prev, grad_c_prev);
    grad_h = grad_h_prev;
    grad_c = grad_c_prev;
  }
  return grad_h;  // gradient w.r.t. Z (the step-0 initial hidden state)
}

void check_window(const Seq2SeqParams& params, const Window& window) {
  require(window.inputs.rows >= 1, Status::Shape, "window: empty inputs");
  require(window.reversed_target.size() == window.inputs.rows, Status::Shape,
          "window: reversed target length != input steps");
  require(window.forecast_target.size() == params.cfg.horizon, Status::Shape,
          "window: forecast target length != horizon");
  require(window.appliance_label < params.cfg.num_classes,
          Status::InvalidArgument, "window: appliance label out of range");
}

}  // namespace

LatentCode encode(const Seq2SeqParams& params, const Array2D& inputs) {
  EncodeTrace trace = encode_with_trace(params, inputs, false);
  return LatentCode{std::move(trace.final_state.h)};
}

std::vector<double> decode_reconstruct(const Seq2SeqParams& params,
                                       const LatentCode& z, std::size_t n,
                                       const std::vector<double>* teacher) {
  require(z.z.size() == params.cfg.hidden, Status::Shape,
          "decode_reconstruct: latent size mismatch");
  if (teacher) {
    require(teacher->size() == n, Status::Shape,
            "decode_reconstruct: teacher length != n");
  }
  return scalar_unroll(params.decoder, params.decoder_out, z, 0.0, n, teacher,
                       false)
      .outputs;
}

std::vector<double> classify_appliance(const Seq2SeqParams& params,
                                       const LatentCode& z) {
  return softmax(params.classifier.forward(z.z));
}

std::vector<double> generate_forecast(const Seq2SeqParams& params,
                                      const LatentCode& z, double last_observed,
                                      const std::vector<double>* teacher) {
  require(z.z.size() == params.cfg.hidden, Status::Shape,
          "generate_forecast: latent size mismatch");
  if (teacher) {
    require(teacher->size() == params.cfg.horizon, Status::Shape,
            "generate_forecast: teacher length != horizon");
  }
  return scalar_unroll(params.generator, params.generator_out, z, last_observed,
                       params.cfg.horizon, teacher, false)
      .outputs;
}

Seq2SeqLossBreakdown seq2seq_loss(const Seq2SeqParams& params,
                                  const Window& window,
                                  const LossWeights& weights) {
  check_window(params, window);
  const std::size_t n = window.inputs.rows;
  EncodeTrace enc = encode_with_trace(params, window.inputs, false);
  const LatentCode z{enc.final_state.h};

  ScalarUnrollTrace dec =
      scalar_unroll(params.decoder, params.decoder_out, z, 0.0, n,
                    &window.reversed_target, false);
  ScalarUnrollTrace gen = scalar_unroll(
      params.generator, params.generator_out, z, window.last_observed_power(),
      params.cfg.horizon, &window.forecast_target, false);
  const std::vector<double> logits = params.classifier.forward(z.z);

  Seq2SeqLossBreakdown out;
  out.dec_loss = loss_weighted_mse(dec.outputs, window.reversed_target, weights).value;
  out.gen_loss = loss_mse(gen.outputs, window.forecast_target).value;
  out.cls_loss = loss_cross_entropy(logits, window.appliance_label).value;
  out.total = out.gen_loss + params.cfg.lambda_dec * out.dec_loss +
              params.cfg.lambda_cls * out.cls_loss;
  return out;
}

Seq2SeqLossBreakdown seq2seq_forward_backward(const Seq2SeqParams& params,
                                              const Window& window,
                                              const LossWeights& weights,
                                              Seq2SeqGrads& grads) {
  check_window(params, window);
  const std::size_t n = window.inputs.rows;
  const std::size_t hidden = params.cfg.hidden;

  EncodeTrace enc = encode_with_trace(params, window.inputs, true);
  const LatentCode z{enc.final_state.h};

  ScalarUnrollTrace dec =
      scalar_unroll(params.decoder, params.decoder_out, z, 0.0, n,
                    &window.reversed_target, true);
  ScalarUnrollTrace gen = scalar_unroll(
      params.generator, params.generator_out, z, window.last_observed_power(),
      params.cfg.horizon, &window.forecast_target, true);
  const std::vector<double> logits = params.classifier.forward(z.z);

  LossResult dec_loss = loss_weighted_mse(dec.outputs, window.reversed_target, weights);
  LossResult gen_loss = loss_mse(gen.outputs, window.forecast_target);
  LossResult cls_loss = loss_cross_entropy(logits, window.appliance_label);

  Seq2SeqLossBreakdown out;
  out.dec_loss = dec_loss.value;
  out.gen_loss = gen_loss.value;
  out.cls_loss = cls_loss.value;
  out.total = out.gen_loss + params.cfg.lambda_dec * out.dec_loss +
              params.cfg.lambda_cls * out.cls_loss;

  // Head losses scale into the total.
  for (double& g : dec_loss.grad) g *= params.cfg.lambda_dec;
  for (double& g : cls_loss.grad) g *= params.cfg.lambda_cls;

  // All three heads feed gradient into Z.
  std::vector<double> grad_z =
      scalar_unroll_backward(params.decoder, params.decoder_out, dec,
                             dec_loss.grad, grads.decoder, grads.decoder_out);
  {
    std::vector<double> gz_gen = scalar_unroll_backward(
        params.generator, params.generator_out, gen, gen_loss.grad,
        grads.generator, grads.generator_out);
    for (std::size_t j = 0; j < hidden; ++j) grad_z[j] += gz_gen[j];
  }
  {
    std::vector<double> gz_cls(hidden);
    params.classifier.backward(z.z, cls_loss.grad, grads.classifier, gz_cls);
    for (std::size_t j = 0; j < hidden; ++j) grad_z[j] += gz_cls[j];
  }

  // BPTT through the encoder from the latent code.
  std::vector<double> grad_h = std::move(grad_z);
  std::vector<double> grad_c(hidden, 0.0);
  std::vector<double> grad_h_prev(hidden), grad_c_prev(hidden);
  std::vector<double> grad_x(params.encoder.input_size);
  for (std::size_t t = n; t-- > 0;) {
    lstm_cell_backward(params.encoder, enc.caches[t], grad_h, grad_c,
                       grads.encoder, grad_x, grad_h_prev, grad_c_prev);
    grad_h = grad_h_prev;
    grad_c = grad_c_prev;
  }
  return out;
}

Seq2SeqLossBreakdown seq2seq_train_step(Seq2SeqParams& params,
                                        const Window& window,
                                        const LossWeights& weights,
                                        AdamState& opt, double clip_norm) {
  Seq2SeqGrads grads(params.cfg);
  Seq2SeqLossBreakdown losses =
      seq2seq_forward_backward(params, window, weights, grads);
  if (!std::isfinite(losses.total)) {
    fail(Status::Divergence, "seq2seq_train_step: non-finite loss");
  }
  ParamRefs prefs, grefs;
  params.collect(prefs);
  grads.collect(grefs);
  if (clip_norm > 0.0) clip_global_norm(grefs, clip_norm);
  adam_step(opt, prefs, grefs);
  return losses;
}

}  // namespace slf

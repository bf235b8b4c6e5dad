#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

#include "slf/runner.hpp"

namespace slf {

namespace {

void append_double(std::string& out, double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, ptr);
}

struct OptSettings {
  AdamConfig adam;
  double clip_norm = 5.0;
  int epochs = 200;
  int patience = 10;
  std::size_t batch_size = 32;
};

OptSettings opt_from_config(const RunConfig& cfg) {
  OptSettings s;
  s.adam.lr = cfg.get_double("lr");
  s.adam.beta1 = cfg.get_double("beta1");
  s.adam.beta2 = cfg.get_double("beta2");
  s.adam.eps = cfg.get_double("eps");
  s.clip_norm = cfg.get_double("clip_norm");
  s.epochs = static_cast<int>(cfg.get_int("epochs"));
  s.patience = static_cast<int>(cfg.get_int("patience"));
  s.batch_size = static_cast<std::size_t>(cfg.get_int("batch_size"));
  require(s.epochs >= 1 && s.patience >= 1 && s.batch_size >= 1,
          Status::InvalidArgument,
          "epochs, patience and batch_size must be positive");
  return s;
}

// Appliance one-hot appended after the pipeline features.
Array2D augment_with_class(const Array2D& inputs, std::size_t label,
                           std::size_t num_classes) {
  Array2D out(inputs.rows, inputs.cols + num_classes);
  for (std::size_t t = 0; t < inputs.rows; ++t) {
    const double* src = inputs.row(t);
    double* dst = out.row(t);
    for (std::size_t c = 0; c < inputs.cols; ++c) dst[c] = src[c];
    dst[inputs.cols + label] = 1.0;
  }
  return out;
}

std::vector<Window> windows_for_all(const TimeSeriesTable& split,
                                    const NormalizerStats& norm,
                                    const PreprocessConfig& pre,
                                    const std::string& building) {
  std::vector<Window> all;
  for (std::size_t a = 0; a < split.cols(); ++a) {
    std::vector<Window> w = make_windows(split, a, norm, pre, building);
    for (Window& win : w) all.push_back(std::move(win));
  }
  return all;
}

// Normalized multivariate matrix (rows x k) of a split.
Array2D normalized_matrix(const TimeSeriesTable& split,
                          const NormalizerStats& norm) {
  Array2D out(split.rows(), split.cols());
  for (std::size_t c = 0; c < split.cols(); ++c) {
    const std::size_t s = norm.index_of(split.appliances[c]);
    for (std::size_t r = 0; r < split.rows(); ++r) {
      out.at(r, c) =
          normalize_value(split.columns[c][r], norm.min_watts[s],
                          norm.max_watts[s]);
    }
  }
  return out;
}

// One-step-ahead MSE with long-VAR innovation proxies; used both for the
// varma training log and for validation_loss so the two always agree.
double varma_one_step_mse(const VarmaModel& model, const Array2D& series) {
  const std::size_t k = model.k;
  require(series.cols == k, Status::Shape, "varma mse: channel mismatch");
  const std::size_t start = std::max(model.p, model.long_order + model.q);
  if (series.rows <= start) return 0.0;
  const Array2D residuals = model.residual_proxies(series);
  double acc = 0.0;
  std::size_t count = 0;
  for (std::size_t t = start; t < series.rows; ++t) {
    for (std::size_t row = 0; row < k; ++row) {
      double pred = model.intercept[row];
      for (std::size_t lag = 1; lag <= model.p; ++lag) {
        const double* past = series.row(t - lag);
        const double* arow = model.ar_coeffs[lag - 1].row(row);
        for (std::size_t c = 0; c < k; ++c) pred += arow[c] * past[c];
      }
      for (std::size_t lag = 1; lag <= model.q; ++lag) {
        const double* erow = residuals.row(t - lag);
        const double* mrow = model.ma_coeffs[lag - 1].row(row);
        for (std::size_t c = 0; c < k; ++c) pred += mrow[c] * erow[c];
      }
      const double err = series.at(t, row) - pred;
      acc += err * err;
      ++count;
    }
  }
  return acc / static_cast<double>(count);
}

struct EpochLog {
  std::string header;
  std::vector<std::string> rows;
  double best_val = std::numeric_limits<double>::infinity();
  int best_epoch = 0;

  std::string to_csv() const {
    std::string out = header + "\n";
    for (const std::string& r : rows) out += r + "\n";
    out += "# best_epoch=" + std::to_string(best_epoch) + " best_val_loss=";
    append_double(out, best_val);
    out += "\n";
    return out;
  }
};

void log_epoch_line(std::string model, int epoch, double train, double val) {
  std::fprintf(stderr, "[train %s] epoch %d train %.6f val %.6f\n",
               model.c_str(), epoch, train, val);
}

}  // namespace

PreprocessConfig preprocess_from_config(const RunConfig& cfg) {
  PreprocessConfig pre;
  pre.resample_minutes = static_cast<int>(cfg.get_int("resample_minutes"));
  pre.input_steps = static_cast<std::size_t>(cfg.get_int("input_steps"));
  pre.horizon_steps = static_cast<std::size_t>(cfg.get_int("horizon_steps"));
  pre.stride = static_cast<std::size_t>(cfg.get_int("stride"));
  pre.train_ratio = cfg.get_double("train_ratio");
  pre.val_ratio = cfg.get_double("val_ratio");
  pre.test_ratio = cfg.get_double("test_ratio");
  pre.validate();
  return pre;
}

PreparedData prepare_data(const TimeSeriesTable& raw,
                          const PreprocessConfig& pre) {
  pre.validate();
  PreparedData out;
  // Gaps first, then binning; empty bins get re-interpolated.
  out.resampled =
      interpolate_missing(resample_mean(interpolate_missing(raw),
                                        pre.resample_minutes));
  out.splits = chronological_split(out.resampled, pre.train_ratio, pre.val_ratio,
                                   pre.test_ratio, pre.window_rows());
  out.norm = fit_normalizer(out.splits.train);
  return out;
}

TrainOutcome train_model(const RunConfig& cfg, const TimeSeriesTable& raw) {
  const std::string kind = cfg.get_string("model");
  const std::string building = cfg.get_string("building");
  const std::uint64_t seed = cfg.get_uint("seed");
  const PreprocessConfig pre = preprocess_from_config(cfg);

  TimeSeriesTable table = raw;
  if (cfg.has("appliances")) table = raw.select(cfg.get_list("appliances"));
  const PreparedData data = prepare_data(table, pre);
  const std::size_t num_classes = table.cols();

  TrainOutcome outcome;
  outcome.bundle.kind = kind;
  outcome.bundle.building = building;
  outcome.bundle.appliances = table.appliances;
  outcome.bundle.pre = pre;
  outcome.bundle.norm = data.norm;

  if (kind == "varma") {
    const std::size_t p = static_cast<std::size_t>(cfg.get_int("varma_p"));
    const std::size_t q = static_cast<std::size_t>(cfg.get_int("varma_q"));
    const Array2D train = normalized_matrix(data.splits.train, data.norm);
    VarmaModel model = hannan_rissanen_fit(train, p, q);
    std::fprintf(stderr,
                 "[train varma] p=%zu q=%zu spectral radius %.4f%s\n", p, q,
                 model.spectral_radius,
                 model.spectral_radius < 1.0 ? "" : " (unstable!)");
    const double train_mse = varma_one_step_mse(model, train);
    const double val_mse = varma_one_step_mse(
        model, normalized_matrix(data.splits.validation, data.norm));
    outcome.bundle.varma = std::move(model);
    EpochLog log;
    log.header = "epoch,train_mse,val_mse";
    std::string row = "0,";
    append_double(row, train_mse);
    row += ',';
    append_double(row, val_mse);
    log.rows.push_back(row);
    log.best_val = val_mse;
    outcome.best_val_loss = val_mse;
    outcome.best_epoch = 0;
    outcome.epochs_run = 0;
    outcome.log_csv = log.to_csv();
    return outcome;
  }

  const OptSettings opt = opt_from_config(cfg);
  const std::size_t hidden =
      static_cast<std::size_t>(cfg.get_int("hidden_size"));
  Rng init_rng(derive_seed(seed, "init"));
  Rng shuffle_rng(derive_seed(seed, "shuffle"));

  if (kind == "seq2seq") {
    std::vector<Window> train_w =
        windows_for_all(data.splits.train, data.norm, pre, building);
    std::vector<Window> val_w =
        windows_for_all(data.splits.validation, data.norm, pre, building);
    const LossWeights weights = LossWeights::recency(pre.input_steps).reversed();

    Seq2SeqConfig mcfg;
    mcfg.input_features = 8;
    mcfg.hidden = hidden;
    mcfg.horizon = pre.horizon_steps;
    mcfg.num_classes = num_classes;
    mcfg.lambda_dec = cfg.get_double("lambda_dec");
    mcfg.lambda_cls = cfg.get_double("lambda_cls");
    Seq2SeqParams params(mcfg);
    params.init(init_rng);
    Seq2SeqGrads grads(mcfg);
    ParamRefs prefs, grefs;
    params.collect(prefs);
    grads.collect(grefs);
    AdamState adam(total_len(prefs), opt.adam);

    Seq2SeqParams best = params;
    EpochLog log;
    log.header =
        "epoch,train_gen,train_dec,train_cls,train_total,"
        "val_gen,val_dec,val_cls,val_total";
    int wait = 0;
    std::vector<std::size_t> order(train_w.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    for (int epoch = 1; epoch <= opt.epochs; ++epoch) {
      shuffle(order, shuffle_rng);
      Seq2SeqLossBreakdown train_sum;
      for (std::size_t start = 0; start < order.size();
           start += opt.batch_size) {
        const std::size_t stop =
            std::min(order.size(), start + opt.batch_size);
        zero_params(grefs);
        for (std::size_t i = start; i < stop; ++i) {
          const Seq2SeqLossBreakdown l = seq2seq_forward_backward(
              params, train_w[order[i]], weights, grads);
          train_sum.gen_loss += l.gen_loss;
          train_sum.dec_loss += l.dec_loss;
          train_sum.cls_loss += l.cls_loss;
          train_sum.total += l.total;
        }
        scale_params(grefs, 1.0 / static_cast<double>(stop - start));
        if (opt.clip_norm > 0) clip_global_norm(grefs, opt.clip_norm);
        adam_step(adam, prefs, grefs);
      }
      const double inv_n = 1.0 / static_cast<double>(train_w.size());
      if (!std::isfinite(train_sum.total)) {
        fail(Status::Divergence, "seq2seq training diverged (non-finite loss)");
      }

      Seq2SeqLossBreakdown val_sum;
      for (const Window& w : val_w) {
        const Seq2SeqLossBreakdown l = seq2seq_loss(params, w, weights);
        val_sum.gen_loss += l.gen_loss;
        val_sum.dec_loss += l.dec_loss;
        val_sum.cls_loss += l.cls_loss;
        val_sum.total += l.total;
      }
      const double inv_v = 1.0 / static_cast<double>(val_w.size());

      std::string row = std::to_string(epoch) + ",";
      for (double v : {train_sum.gen_loss * inv_n, train_sum.dec_loss * inv_n,
                       train_sum.cls_loss * inv_n, train_sum.total * inv_n,
                       val_sum.gen_loss * inv_v, val_sum.dec_loss * inv_v,
                       val_sum.cls_loss * inv_v}) {
        append_double(row, v);
        row += ',';
      }
      append_double(row, val_sum.total * inv_v);
      log.rows.push_back(row);
      log_epoch_line("seq2seq", epoch, train_sum.total * inv_n,
                     val_sum.total * inv_v);

      outcome.epochs_run = epoch;
      if (val_sum.total * inv_v < log.best_val) {
        log.best_val = val_sum.total * inv_v;
        log.best_epoch = epoch;
        best = params;
        wait = 0;
      } else if (++wait >= opt.patience) {
        break;
      }
    }
    outcome.bundle.seq2seq = std::move(best);
    outcome.best_val_loss = log.best_val;
    outcome.best_epoch = log.best_epoch;
    outcome.log_csv = log.to_csv();
    return outcome;
  }

  if (kind == "lstm") {
    std::vector<Window> train_w =
        windows_for_all(data.splits.train, data.norm, pre, building);
    std::vector<Window> val_w =
        windows_for_all(data.splits.validation, data.norm, pre, building);

    LstmBaselineParams params(8 + num_classes, hidden, pre.horizon_steps);
    params.init(init_rng);
    LstmBaselineParams grads(8 + num_classes, hidden, pre.horizon_steps);
    ParamRefs prefs, grefs;
    params.collect(prefs);
    grads.collect(grefs);
    AdamState adam(total_len(prefs), opt.adam);

    LstmBaselineParams best = params;
    EpochLog log;
    log.header = "epoch,train_mse,val_mse";
    int wait = 0;
    std::vector<std::size_t> order(train_w.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    for (int epoch = 1; epoch <= opt.epochs; ++epoch) {
      shuffle(order, shuffle_rng);
      double train_sum = 0.0;
      for (std::size_t start = 0; start < order.size();
           start += opt.batch_size) {
        const std::size_t stop = std::min(order.size(), start + opt.batch_size);
        zero_params(grefs);
        for (std::size_t i = start; i < stop; ++i) {
          const Window& w = train_w[order[i]];
          const Array2D inputs =
              augment_with_class(w.inputs, w.appliance_label, num_classes);
          train_sum += lstm_baseline_forward_backward(params, inputs,
                                                      w.forecast_target, grads);
        }
        scale_params(grefs, 1.0 / static_cast<double>(stop - start));
        if (opt.clip_norm > 0) clip_global_norm(grefs, opt.clip_norm);
        adam_step(adam, prefs, grefs);
      }
      if (!std::isfinite(train_sum)) {
        fail(Status::Divergence, "lstm training diverged (non-finite loss)");
      }

      double val_sum = 0.0;
      for (const Window& w : val_w) {
        const Array2D inputs =
            augment_with_class(w.inputs, w.appliance_label, num_classes);
        const std::vector<double> pred = lstm_baseline_forward(params, inputs);
        val_sum += loss_mse(pred, w.forecast_target).value;
      }
      const double train_mse = train_sum / static_cast<double>(train_w.size());
      const double val_mse = val_sum / static_cast<double>(val_w.size());

      std::string row = std::to_string(epoch) + ",";
      append_double(row, train_mse);
      row += ',';
      append_double(row, val_mse);
      log.rows.push_back(row);
      log_epoch_line("lstm", epoch, train_mse, val_mse);

      outcome.epochs_run = epoch;
      if (val_mse < log.best_val) {
        log.best_val = val_mse;
        log.best_epoch = epoch;
        best = params;
        wait = 0;
      } else if (++wait >= opt.patience) {
        break;
      }
    }
    outcome.bundle.lstm = std::move(best);
    outcome.best_val_loss = log.best_val;
    outcome.best_epoch = log.best_epoch;
    outcome.log_csv = log.to_csv();
    return outcome;
  }

  if (kind == "conv1d") {
    const std::size_t channels =
        static_cast<std::size_t>(cfg.get_int("conv_channels"));
    const std::size_t kw =
        static_cast<std::size_t>(cfg.get_int("conv_kernel_width"));
    const std::size_t nlayers =
        static_cast<std::size_t>(cfg.get_int("conv_layers"));
    std::vector<std::size_t> dilations;
    for (std::size_t l = 0; l < nlayers; ++l) {
      dilations.push_back(std::size_t{1} << l);
    }

    EpochLog log;
    log.header = "epoch,appliance,train_mse,val_mse";
    double best_val_sum = 0.0;
    int last_best_epoch = 0;
    int max_epochs_run = 0;

    for (std::size_t a = 0; a < table.cols(); ++a) {
      const std::string& name = table.appliances[a];
      std::vector<Window> train_w =
          make_windows(data.splits.train, a, data.norm, pre, building);
      std::vector<Window> val_w =
          make_windows(data.splits.validation, a, data.norm, pre, building);

      Conv1DParams params(8, channels, kw, dilations, pre.horizon_steps);
      require(params.receptive_field() >= pre.input_steps,
              Status::InvalidArgument,
              "conv1d receptive field smaller than the input window; add "
              "layers or widen the kernel");
      Rng net_rng(derive_seed(seed, "init/" + name));
      params.init(net_rng);
      Conv1DParams grads(8, channels, kw, dilations, pre.horizon_steps);
      ParamRefs prefs, grefs;
      params.collect(prefs);
      grads.collect(grefs);
      AdamState adam(total_len(prefs), opt.adam);
      Rng net_shuffle(derive_seed(seed, "shuffle/" + name));

      Conv1DParams best = params;
      double best_val = std::numeric_limits<double>::infinity();
      int best_epoch = 0;
      int wait = 0;
      std::vector<std::size_t> order(train_w.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

      for (int epoch = 1; epoch <= opt.epochs; ++epoch) {
        shuffle(order, net_shuffle);
        double train_sum = 0.0;
        for (std::size_t start = 0; start < order.size();
             start += opt.batch_size) {
          const std::size_t stop =
              std::min(order.size(), start + opt.batch_size);
          zero_params(grefs);
          for (std::size_t i = start; i < stop; ++i) {
            const Window& w = train_w[order[i]];
            train_sum += conv1d_forward_backward(params, w.inputs,
                                                 w.forecast_target, grads);
          }
          scale_params(grefs, 1.0 / static_cast<double>(stop - start));
          if (opt.clip_norm > 0) clip_global_norm(grefs, opt.clip_norm);
          adam_step(adam, prefs, grefs);
        }
        if (!std::isfinite(train_sum)) {
          fail(Status::Divergence,
               "conv1d training diverged on " + name + " (non-finite loss)");
        }
        double val_sum = 0.0;
        for (const Window& w : val_w) {
          const std::vector<double> pred =
              conv1d_causal_forward(params, w.inputs, nullptr);
          val_sum += loss_mse(pred, w.forecast_target).value;
        }
        const double train_mse =
            train_sum / static_cast<double>(train_w.size());
        const double val_mse = val_sum / static_cast<double>(val_w.size());

        std::string row = std::to_string(epoch) + "," + name + ",";
        append_double(row, train_mse);
        row += ',';
        append_double(row, val_mse);
        log.rows.push_back(row);
        log_epoch_line("conv1d/" + name, epoch, train_mse, val_mse);

        max_epochs_run = std::max(max_epochs_run, epoch);
        if (val_mse < best_val) {
          best_val = val_mse;
          best_epoch = epoch;
          best = params;
          wait = 0;
        } else if (++wait >= opt.patience) {
          break;
        }
      }
      outcome.bundle.conv.push_back(std::move(best));
      best_val_sum += best_val;
      last_best_epoch = std::max(last_best_epoch, best_epoch);
    }
    log.best_val = best_val_sum / static_cast<double>(table.cols());
    log.best_epoch = last_best_epoch;
    outcome.best_val_loss = log.best_val;
    outcome.best_epoch = log.best_epoch;
    outcome.epochs_run = max_epochs_run;
    outcome.log_csv = log.to_csv();
    return outcome;
  }

  fail(Status::InvalidArgument,
       "unknown model kind '" + kind + "' (want seq2seq|lstm|conv1d|varma)");
}

double validation_loss(const ModelBundle& bundle, const PreparedData& data) {
  const PreprocessConfig& pre = bundle.pre;
  if (bundle.varma) {
    return varma_one_step_mse(
        *bundle.varma, normalized_matrix(data.splits.validation, bundle.norm));
  }
  std::vector<Window> val_w = windows_for_all(data.splits.validation,
                                              bundle.norm, pre, bundle.building);
  if (bundle.seq2seq) {
    const LossWeights weights = LossWeights::recency(pre.input_steps).reversed();
    double sum = 0.0;
    for (const Window& w : val_w) {
      sum += seq2seq_loss(*bundle.seq2seq, w, weights).total;
    }
    return sum / static_cast<double>(val_w.size());
  }
  if (bundle.lstm) {
    double sum = 0.0;
    for (const Window& w : val_w) {
      const Array2D inputs = augment_with_class(w.inputs, w.appliance_label,
                                                bundle.appliances.size());
      sum += loss_mse(lstm_baseline_forward(*bundle.lstm, inputs),
                      w.forecast_target)
                 .value;
    }
    return sum / static_cast<double>(val_w.size());
  }
  if (!bundle.conv.empty()) {
    // mean over appliances of that appliance's mean window MSE
    double total = 0.0;
    for (std::size_t a = 0; a < bundle.appliances.size(); ++a) {
      double sum = 0.0;
      std::size_t count = 0;
      for (const Window& w : val_w) {
        if (w.appliance_label != a) continue;
        sum += loss_mse(conv1d_causal_forward(bundle.conv[a], w.inputs, nullptr),
                        w.forecast_target)
                   .value;
        ++count;
      }
      total += sum / static_cast<double>(count);
    }
    return total / static_cast<double>(bundle.appliances.size());
  }
  fail(Status::Internal, "validation_loss: empty bundle");
}

EvalOutcome evaluate_model(const ModelBundle& bundle, const TimeSeriesTable& raw) {
  const PreprocessConfig& pre = bundle.pre;
  const TimeSeriesTable table = raw.select(bundle.appliances);
  const PreparedData data = prepare_data(table, pre);
  const TimeSeriesTable& test = data.splits.test;
  const std::size_t n = pre.input_steps;
  const std::size_t m = pre.horizon_steps;
  const std::size_t k = bundle.appliances.size();

  // Full recorded range per appliance (all splits), for NRMSE.
  std::vector<double> range_min(k), range_max(k);
  for (std::size_t a = 0; a < k; ++a) {
    double mn = data.resampled.columns[a][0], mx = mn;
    for (double v : data.resampled.columns[a]) {
      mn = std::min(mn, v);
      mx = std::max(mx, v);
    }
    range_min[a] = mn;
    range_max[a] = mx;
  }

  // Rolling non-overlapping hour-ahead windows over the test split.
  PreprocessConfig rolling = pre;
  rolling.stride = m;

  std::vector<std::vector<double>> preds(k), truths(k);
  std::vector<std::string> csvs(k, "timestamp,ground_truth_watts,prediction_watts\n");

  Array2D test_norm;
  if (bundle.varma) test_norm = normalized_matrix(test, bundle.norm);

  for (std::size_t a = 0; a < k; ++a) {
    const std::size_t s_idx = bundle.norm.index_of(bundle.appliances[a]);
    const double mn = bundle.norm.min_watts[s_idx];
    const double mx = bundle.norm.max_watts[s_idx];
    const std::vector<Window> windows =
        make_windows(test, a, bundle.norm, rolling, bundle.building);

    for (std::size_t idx = 0; idx < windows.size(); ++idx) {
      const Window& w = windows[idx];
      const std::size_t start = idx * m;  // window start row in the test split
      std::vector<double> forecast_norm;

      if (bundle.seq2seq) {
        const LatentCode z = encode(*bundle.seq2seq, w.inputs);
        forecast_norm = generate_forecast(*bundle.seq2seq, z,
                                          w.last_observed_power(), nullptr);
      } else if (bundle.lstm) {
        forecast_norm = lstm_baseline_forward(
            *bundle.lstm, augment_with_class(w.inputs, a, k));
      } else if (!bundle.conv.empty()) {
        forecast_norm = conv1d_causal_forward(bundle.conv[a], w.inputs, nullptr);
      } else if (bundle.varma) {
        Array2D recent(n, k);
        for (std::size_t t = 0; t < n; ++t) {
          for (std::size_t c = 0; c < k; ++c) {
            recent.at(t, c) = test_norm.at(start + t, c);
          }
        }
        const Array2D f = varma_forecast(*bundle.varma, recent, m);
        forecast_norm.resize(m);
        for (std::size_t j = 0; j < m; ++j) forecast_norm[j] = f.at(j, a);
      } else {
        fail(Status::Internal, "evaluate: empty bundle");
      }

      for (std::size_t j = 0; j < m; ++j) {
        const double watts =
            std::max(0.0, denormalize_value(forecast_norm[j], mn, mx));
        const double truth = test.columns[a][start + n + j];
        preds[a].push_back(watts);
        truths[a].push_back(truth);
        csvs[a] += format_timestamp(test.timestamps[start + n + j]);
        csvs[a] += ',';
        append_double(csvs[a], truth);
        csvs[a] += ',';
        append_double(csvs[a], watts);
        csvs[a] += '\n';
      }
    }
  }

  EvalOutcome out;
  for (std::size_t a = 0; a < k; ++a) {
    MetricReport r;
    r.building = bundle.building;
    r.appliance = bundle.appliances[a];
    r.model = bundle.kind;
    r.rmse = rmse(preds[a], truths[a]);
    r.mae = mae(preds[a], truths[a]);
    r.nrmse = nrmse(preds[a], truths[a], range_min[a], range_max[a]);
    r.sample_count = preds[a].size();
    out.reports.push_back(std::move(r));
    out.prediction_csvs.push_back(std::move(csvs[a]));
  }
  return out;
}

ForecastOutcome forecast_tail(const ModelBundle& bundle,
                              const TimeSeriesTable& raw,
                              const std::string& appliance) {
  const PreprocessConfig& pre = bundle.pre;
  const std::size_t n = pre.input_steps;
  const std::size_t m = pre.horizon_steps;

  bool known = false;
  for (const std::string& a : bundle.appliances) known |= (a == appliance);
  require(known, Status::Mismatch,
          "appliance '" + appliance + "' is not part of this model");

  // varma forecasts all channels jointly and needs every one of them.
  const TimeSeriesTable table =
      bundle.varma ? raw.select(bundle.appliances)
                   : raw.select(std::vector<std::string>{appliance});
  const TimeSeriesTable resampled = interpolate_missing(
      resample_mean(interpolate_missing(table), pre.resample_minutes));
  if (resampled.rows() < n) {
    fail(Status::InsufficientData,
         "need at least " + std::to_string(n) + " resampled steps (" +
             std::to_string(n * pre.resample_minutes / 60) +
             " h), got " + std::to_string(resampled.rows()));
  }
  const std::size_t start = resampled.rows() - n;
  const std::size_t cls = [&] {
    for (std::size_t i = 0; i < bundle.appliances.size(); ++i) {
      if (bundle.appliances[i] == appliance) return i;
    }
    return std::size_t{0};
  }();
  const std::size_t s_idx = bundle.norm.index_of(appliance);
  const double mn = bundle.norm.min_watts[s_idx];
  const double mx = bundle.norm.max_watts[s_idx];

  ForecastOutcome out;
  std::vector<double> forecast_norm;

  if (bundle.varma) {
    Array2D recent(n, bundle.appliances.size());
    for (std::size_t t = 0; t < n; ++t) {
      for (std::size_t c = 0; c < bundle.appliances.size(); ++c) {
        const std::size_t si = bundle.norm.index_of(resampled.appliances[c]);
        recent.at(t, c) =
            normalize_value(resampled.columns[c][start + t],
                            bundle.norm.min_watts[si], bundle.norm.max_watts[si]);
      }
    }
    const Array2D f = varma_forecast(*bundle.varma, recent, m);
    const std::size_t chan = resampled.appliance_index(appliance);
    forecast_norm.resize(m);
    for (std::size_t j = 0; j < m; ++j) forecast_norm[j] = f.at(j, chan);
  } else {
    Array2D inputs(n, 8);
    for (std::size_t t = 0; t < n; ++t) {
      inputs.at(t, 0) =
          normalize_value(resampled.columns[0][start + t], mn, mx);
      inputs.at(t, 1 + utc_weekday(resampled.timestamps[start + t])) = 1.0;
    }
    if (bundle.seq2seq) {
      const LatentCode z = encode(*bundle.seq2seq, inputs);
      forecast_norm =
          generate_forecast(*bundle.seq2seq, z, inputs.at(n - 1, 0), nullptr);
      out.class_probs = classify_appliance(*bundle.seq2seq, z);
    } else if (bundle.lstm) {
      forecast_norm = lstm_baseline_forward(
          *bundle.lstm,
          augment_with_class(inputs, cls, bundle.appliances.size()));
    } else if (!bundle.conv.empty()) {
      forecast_norm = conv1d_causal_forward(bundle.conv[cls], inputs, nullptr);
    } else {
      fail(Status::Internal, "forecast: empty bundle");
    }
  }

  const std::int64_t last_ts = resampled.timestamps.back();
  const std::int64_t step_s =
      static_cast<std::int64_t>(pre.resample_minutes) * 60;
  for (std::size_t j = 0; j < m; ++j) {
    out.timestamps.push_back(last_ts + static_cast<std::int64_t>(j + 1) * step_s);
    out.watts.push_back(std::max(0.0, denormalize_value(forecast_norm[j], mn, mx)));
  }
  return out;
}

}  // namespace slf

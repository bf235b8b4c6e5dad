#pragma once

#include <optional>
#include <string>
#include <vector>

#include "slf/baselines.hpp"
#include "slf/config.hpp"
#include "slf/metrics.hpp"
#include "slf/pipeline.hpp"
#include "slf/seq2seq.hpp"
#include "slf/synth.hpp"
#include "slf/varma.hpp"

namespace slf {

// A trained model plus everything needed to run it on new data: the
// preprocessing geometry, the appliance roster (class/channel order) and the
// train-split normalizer. Exactly one of the model slots is engaged.
struct ModelBundle {
  std::string kind;  // seq2seq | lstm | conv1d | varma
  std::string building;
  std::vector<std::string> appliances;
  PreprocessConfig pre;
  NormalizerStats norm;

  std::optional<Seq2SeqParams> seq2seq;
  std::optional<LstmBaselineParams> lstm;
  std::vector<Conv1DParams> conv;  // one per appliance
  std::optional<VarmaModel> varma;
};

void save_bundle(const ModelBundle& bundle, const std::string& path);
ModelBundle load_bundle(const std::string& path);

// interpolate -> resample -> re-interpolate empty bins -> chronological split
// -> train-split normalizer.
struct PreparedData {
  TimeSeriesTable resampled;  // full preprocessed table
  SplitTables splits;
  NormalizerStats norm;
};

PreparedData prepare_data(const TimeSeriesTable& raw, const PreprocessConfig& pre);

SynthSpec synth_spec_from_config(const RunConfig& cfg);
PreprocessConfig preprocess_from_config(const RunConfig& cfg);

struct TrainOutcome {
  ModelBundle bundle;
  double best_val_loss = 0.0;
  int best_epoch = 0;
  int epochs_run = 0;
  std::string log_csv;  // per-epoch loss terms
};

TrainOutcome train_model(const RunConfig& cfg, const TimeSeriesTable& raw);

// Model-appropriate validation loss, the quantity the trainer early-stops on.
double validation_loss(const ModelBundle& bundle, const PreparedData& data);

struct EvalOutcome {
  std::vector<MetricReport> reports;  // one per appliance
  // Parallel to reports: per-appliance prediction CSV text
  // (timestamp,ground_truth_watts,prediction_watts).
  std::vector<std::string> prediction_csvs;
};

// Rolling hour-ahead evaluation over the test split: non-overlapping windows
// at stride m, each forecast conditioned on true history, denormalized and
// clipped at zero.
EvalOutcome evaluate_model(const ModelBundle& bundle, const TimeSeriesTable& raw);

// Forecast from the tail of a raw table. Returns denormalized watts (clipped
// at zero) and, for seq2seq, the appliance probability vector.
struct ForecastOutcome {
  std::vector<std::int64_t> timestamps;
  std::vector<double> watts;
  std::vector<double> class_probs;  // empty for non-seq2seq models
};

ForecastOutcome forecast_tail(const ModelBundle& bundle, const TimeSeriesTable& raw,
                              const std::string& appliance);

// Command-level entry points (what the C API and CLI call). All file paths
// come from the config; progress goes to stderr, results to files.
void run_synth(const RunConfig& cfg);
void run_train(const RunConfig& cfg);
void run_evaluate(const RunConfig& cfg);
std::string run_forecast(const RunConfig& cfg);  // returns the report text
void run_report(const std::vector<std::string>& inputs, const RunConfig& cfg);

}  // namespace slf

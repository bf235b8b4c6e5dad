#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <doctest.h>

#include "slf/runner.hpp"

using namespace slf;

TEST_SUITE_BEGIN("harness");

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("slf_harness_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

// 40 synthetic days at 10-minute steps: enough rows for every split while
// keeping training runs quick.
TimeSeriesTable tiny_building(std::uint64_t seed = 5) {
  SynthSpec spec;
  spec.appliances = default_roster();
  spec.days = 40;
  spec.step_minutes = 10;
  spec.seed = seed;
  return compose_building(spec);
}

RunConfig tiny_train_config(const std::string& kind) {
  RunConfig cfg;
  cfg.set("model", kind);
  cfg.set("hidden_size", "8");
  cfg.set("epochs", "2");
  cfg.set("patience", "2");
  cfg.set("stride", "24");
  cfg.set("conv_layers", "8");
  cfg.set("conv_channels", "4");
  cfg.set("varma_p", "2");
  cfg.set("seed", "3");
  return cfg;
}

}  // namespace

TEST_CASE("config file parsing and key validation") {
  TempDir tmp;
  const std::string path = tmp.file("run.conf");
  std::ofstream(path) << "# a comment\n"
                         "hidden_size = 16   # trailing comment\n"
                         "\n"
                         "model=lstm\n"
                         "seed =  42\n";
  RunConfig cfg;
  cfg.load_file(path);
  CHECK(cfg.get_int("hidden_size") == 16);
  CHECK(cfg.get_string("model") == "lstm");
  CHECK(cfg.get_uint("seed") == 42);
  // untouched keys keep their defaults
  CHECK(cfg.get_int("input_steps") == 144);

  cfg.validate_keys();
  cfg.set("no_such_key", "1");
  CHECK_THROWS_AS(cfg.validate_keys(), Error);

  RunConfig arch;
  arch.set("appliances", "fridge,lamp");
  arch.set("fridge.kind", "cycler");
  arch.validate_keys();
  arch.set("toaster.kind", "event");
  CHECK_THROWS_AS(arch.validate_keys(), Error);

  RunConfig bad;
  bad.set("hidden_size", "not_a_number");
  CHECK_THROWS_AS(bad.get_int("hidden_size"), Error);

  std::ofstream(tmp.file("bad.conf")) << "just words\n";
  RunConfig bad2;
  CHECK_THROWS_AS(bad2.load_file(tmp.file("bad.conf")), Error);
}

TEST_CASE("prepare_data pipeline composition") {
  const TimeSeriesTable raw = tiny_building();
  PreprocessConfig pre;
  const PreparedData data = prepare_data(raw, pre);
  CHECK(data.resampled.rows() == raw.rows());  // already at 10-minute steps
  CHECK(data.splits.train.rows() == 4032);     // 70% of 5760
  CHECK(data.splits.validation.rows() == 1152);
  CHECK(data.splits.test.rows() == 576);
  CHECK(data.norm.appliances.size() == 5);
}

TEST_CASE("varma training, bundle round trip, evaluation") {
  TempDir tmp;
  const TimeSeriesTable raw = tiny_building();
  RunConfig cfg = tiny_train_config("varma");

  const TrainOutcome outcome = train_model(cfg, raw);
  CHECK(outcome.bundle.kind == "varma");
  CHECK(outcome.bundle.varma.has_value());
  CHECK(outcome.log_csv.find("best_val_loss=") != std::string::npos);

  // log's best validation loss must match a fresh recomputation
  const PreparedData data = prepare_data(raw, outcome.bundle.pre);
  CHECK(validation_loss(outcome.bundle, data) ==
        doctest::Approx(outcome.best_val_loss).epsilon(1e-9));

  const std::string path = tmp.file("varma.lsq");
  save_bundle(outcome.bundle, path);
  const ModelBundle loaded = load_bundle(path);
  CHECK(loaded.kind == "varma");
  CHECK(loaded.appliances == outcome.bundle.appliances);
  CHECK(loaded.varma->ar_coeffs[0].data ==
        outcome.bundle.varma->ar_coeffs[0].data);
  CHECK(loaded.varma->residual_history ==
        outcome.bundle.varma->residual_history);

  const EvalOutcome eval = evaluate_model(loaded, raw);
  REQUIRE(eval.reports.size() == 5);
  for (const MetricReport& r : eval.reports) {
    CHECK(r.model == "varma");
    CHECK(r.rmse >= r.mae);
    CHECK(r.nrmse >= 0.0);
    CHECK(r.sample_count > 0);
  }
  // deterministic evaluation
  const EvalOutcome eval2 = evaluate_model(loaded, raw);
  CHECK(eval.prediction_csvs == eval2.prediction_csvs);

  // first prediction timestamp = first test bin after one full input window
  const TimeSeriesTable& test = data.splits.test;
  const std::string& csv = eval.prediction_csvs[0];
  const std::size_t header_end = csv.find('\n');
  const std::string first_data_line =
      csv.substr(header_end + 1, csv.find('\n', header_end + 1) - header_end - 1);
  const std::string first_ts =
      first_data_line.substr(0, first_data_line.find(','));
  CHECK(first_ts ==
        format_timestamp(test.timestamps[outcome.bundle.pre.input_steps]));
}

TEST_CASE("seq2seq smoke training produces a usable bundle") {
  TempDir tmp;
  const TimeSeriesTable raw = tiny_building();
  RunConfig cfg = tiny_train_config("seq2seq");

  const TrainOutcome outcome = train_model(cfg, raw);
  REQUIRE(outcome.bundle.seq2seq.has_value());
  CHECK(outcome.bundle.seq2seq->cfg.num_classes == 5);
  CHECK(outcome.epochs_run >= 1);

  const PreparedData data = prepare_data(raw, outcome.bundle.pre);
  CHECK(validation_loss(outcome.bundle, data) ==
        doctest::Approx(outcome.best_val_loss).epsilon(1e-9));

  const std::string path = tmp.file("s2s.lsq");
  save_bundle(outcome.bundle, path);
  const ModelBundle loaded = load_bundle(path);
  ParamRefs a, b;
  const_cast<ModelBundle&>(outcome.bundle).seq2seq->collect(a);
  const_cast<ModelBundle&>(loaded).seq2seq->collect(b);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a[i].len(); ++j) {
      CHECK(a[i].data[j] == b[i].data[j]);
    }
  }

  const ForecastOutcome f = forecast_tail(loaded, raw, "fridge");
  CHECK(f.watts.size() == 6);
  for (double w : f.watts) CHECK(w >= 0.0);
  REQUIRE(f.class_probs.size() == 5);
  double sum = 0.0;
  for (double p : f.class_probs) sum += p;
  CHECK(std::abs(sum - 1.0) < 1e-9);

  // command-level forecast text: exactly m forecast lines, then K prob lines
  write_csv(raw, tmp.file("raw.csv"));
  RunConfig fcfg;
  fcfg.set("model_file", path);
  fcfg.set("data", tmp.file("raw.csv"));
  fcfg.set("appliance", "fridge");
  const std::string text = run_forecast(fcfg);
  std::size_t forecast_lines = 0, prob_lines = 0, pos = 0;
  while (pos < text.size()) {
    const std::size_t eol = text.find('\n', pos);
    const std::string line = text.substr(pos, eol - pos);
    if (line.rfind("forecast,", 0) == 0) ++forecast_lines;
    if (line.rfind("prob,", 0) == 0) ++prob_lines;
    pos = eol + 1;
  }
  CHECK(forecast_lines == 6);
  CHECK(prob_lines == 5);
}

TEST_CASE("evaluate names the mismatched config field") {
  TempDir tmp;
  const TimeSeriesTable raw = tiny_building();
  RunConfig cfg = tiny_train_config("varma");
  const TrainOutcome outcome = train_model(cfg, raw);
  save_bundle(outcome.bundle, tmp.file("m.lsq"));
  write_csv(raw, tmp.file("raw.csv"));

  RunConfig ecfg;
  ecfg.set("model_file", tmp.file("m.lsq"));
  ecfg.set("data", tmp.file("raw.csv"));
  ecfg.set("out", tmp.file("eval"));
  ecfg.set("create", "true");
  ecfg.set("input_steps", "100");  // model was trained with 144
  try {
    run_evaluate(ecfg);
    FAIL("expected mismatch error");
  } catch (const Error& e) {
    CHECK(e.status() == Status::Mismatch);
    CHECK(std::string(e.what()).find("input_steps") != std::string::npos);
  }
}

TEST_CASE("training is deterministic given the seed") {
  const TimeSeriesTable raw = tiny_building();
  RunConfig cfg = tiny_train_config("lstm");
  cfg.set("epochs", "1");

  const TrainOutcome o1 = train_model(cfg, raw);
  const TrainOutcome o2 = train_model(cfg, raw);
  CHECK(o1.log_csv == o2.log_csv);
  ParamRefs a, b;
  const_cast<ModelBundle&>(o1.bundle).lstm->collect(a);
  const_cast<ModelBundle&>(o2.bundle).lstm->collect(b);
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < a[i].len(); ++j) {
      CHECK(a[i].data[j] == b[i].data[j]);
    }
  }
}

TEST_CASE("appliance filter narrows training scope") {
  const TimeSeriesTable raw = tiny_building();
  RunConfig cfg = tiny_train_config("conv1d");
  cfg.set("appliances", "fridge");
  cfg.set("epochs", "1");

  const TrainOutcome outcome = train_model(cfg, raw);
  CHECK(outcome.bundle.appliances == std::vector<std::string>{"fridge"});
  CHECK(outcome.bundle.conv.size() == 1);

  const EvalOutcome eval = evaluate_model(outcome.bundle, raw);
  CHECK(eval.reports.size() == 1);
  CHECK(eval.reports[0].appliance == "fridge");
}

TEST_CASE("forecast_tail rejects short histories and unknown appliances") {
  const TimeSeriesTable raw = tiny_building();
  RunConfig cfg = tiny_train_config("varma");
  const TrainOutcome outcome = train_model(cfg, raw);

  CHECK_THROWS_AS(forecast_tail(outcome.bundle, raw, "toaster"), Error);

  TimeSeriesTable short_raw = raw;
  for (auto& col : short_raw.columns) col.resize(100);
  short_raw.timestamps.resize(100);
  CHECK_THROWS_AS(forecast_tail(outcome.bundle, short_raw, "fridge"), Error);
}

TEST_CASE("run_report merges and marks winners") {
  TempDir tmp;
  std::vector<MetricReport> r1(1), r2(1);
  r1[0] = {"b0", "fridge", "seq2seq", 40.0, 0.16, 30.0, 100};
  r2[0] = {"b0", "fridge", "varma", 45.0, 0.18, 29.0, 100};
  write_metric_reports(r1, tmp.file("r1.csv"));
  write_metric_reports(r2, tmp.file("r2.csv"));

  RunConfig cfg;
  cfg.set("out", tmp.file("merged"));
  cfg.set("create", "true");
  run_report({tmp.file("r1.csv"), tmp.file("r2.csv")}, cfg);

  std::ifstream in(tmp.file("merged") + "/comparison.csv");
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  CHECK(text.find("b0,fridge,seq2seq,40,1,0.16,1,30,0,100") != std::string::npos);
  CHECK(text.find("b0,fridge,varma,45,0,0.18,0,29,1,100") != std::string::npos);

  // merging a report with itself trips the duplicate check
  CHECK_THROWS_AS(run_report({tmp.file("r1.csv"), tmp.file("r1.csv")}, cfg),
                  Error);
}

TEST_CASE("evaluate rejects models whose appliances are missing") {
  const TimeSeriesTable raw = tiny_building();
  RunConfig cfg = tiny_train_config("varma");
  const TrainOutcome outcome = train_model(cfg, raw);

  const TimeSeriesTable partial =
      raw.select({"fridge", "lamp", "radio", "dishwasher"});
  CHECK_THROWS_AS(evaluate_model(outcome.bundle, partial), Error);
}

TEST_SUITE_END();

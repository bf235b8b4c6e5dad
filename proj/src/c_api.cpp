#include "slf.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "slf/config.hpp"
#include "slf/runner.hpp"

using slf::Error;
using slf::Status;

struct slf_config {
  slf::RunConfig cfg;
};

struct slf_dataset {
  slf::TimeSeriesTable table;
};

struct slf_model {
  slf::ModelBundle bundle;
};

namespace {

thread_local std::string g_last_error;

slf_status to_c_status(Status s) { return static_cast<slf_status>(s); }

// Runs the body, converting exceptions into status codes + thread-local
// message.
template <typename Fn>
slf_status guarded(Fn&& fn) {
  try {
    fn();
    return SLF_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return to_c_status(e.status());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return SLF_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SLF_ERR_INTERNAL;
  }
}

slf_status require_arg(bool ok, const char* msg) {
  if (ok) return SLF_OK;
  g_last_error = msg;
  return SLF_ERR_INVALID_ARGUMENT;
}

}  // namespace

extern "C" {

const char* slf_status_name(slf_status status) {
  return slf::status_name(static_cast<Status>(status));
}

const char* slf_last_error(void) { return g_last_error.c_str(); }

const char* slf_version(void) { return "1.0.0"; }

/* ---- config -------------------------------------------------------------- */

slf_config* slf_config_new(void) { return new (std::nothrow) slf_config(); }

void slf_config_free(slf_config* cfg) { delete cfg; }

slf_status slf_config_load_file(slf_config* cfg, const char* path) {
  if (auto s = require_arg(cfg && path, "null argument")) return s;
  return guarded([&] { cfg->cfg.load_file(path); });
}

slf_status slf_config_set(slf_config* cfg, const char* key, const char* value) {
  if (auto s = require_arg(cfg && key && value, "null argument")) return s;
  return guarded([&] { cfg->cfg.set(key, value); });
}

slf_status slf_config_get(const slf_config* cfg, const char* key, char* buf,
                          size_t buflen) {
  if (auto s = require_arg(cfg && key && buf && buflen > 0, "null argument")) {
    return s;
  }
  return guarded([&] {
    const std::string v = cfg->cfg.get_string(key);
    const size_t n = std::min(buflen - 1, v.size());
    std::memcpy(buf, v.data(), n);
    buf[n] = '\0';
  });
}

size_t slf_config_known_key_count(void) {
  return slf::RunConfig::known_keys().size();
}

const char* slf_config_known_key(size_t index) {
  const auto& keys = slf::RunConfig::known_keys();
  return index < keys.size() ? keys[index].c_str() : nullptr;
}

/* ---- datasets ------------------------------------------------------------ */

slf_status slf_dataset_open_csv(const char* path, slf_dataset** out) {
  if (auto s = require_arg(path && out, "null argument")) return s;
  *out = nullptr;
  return guarded([&] {
    auto ds = new slf_dataset{slf::parse_csv(path)};
    *out = ds;
  });
}

slf_status slf_dataset_synthesize(const slf_config* cfg, slf_dataset** out) {
  if (auto s = require_arg(cfg && out, "null argument")) return s;
  *out = nullptr;
  return guarded([&] {
    const slf::SynthSpec spec = slf::synth_spec_from_config(cfg->cfg);
    auto ds = new slf_dataset{slf::compose_building(spec)};
    *out = ds;
  });
}

slf_status slf_dataset_write_csv(const slf_dataset* ds, const char* path) {
  if (auto s = require_arg(ds && path, "null argument")) return s;
  return guarded([&] { slf::write_csv(ds->table, path); });
}

void slf_dataset_free(slf_dataset* ds) { delete ds; }

size_t slf_dataset_rows(const slf_dataset* ds) {
  return ds ? ds->table.rows() : 0;
}

size_t slf_dataset_appliance_count(const slf_dataset* ds) {
  return ds ? ds->table.cols() : 0;
}

const char* slf_dataset_appliance_name(const slf_dataset* ds, size_t index) {
  if (!ds || index >= ds->table.cols()) return nullptr;
  return ds->table.appliances[index].c_str();
}

/* ---- models -------------------------------------------------------------- */

slf_status slf_train(const slf_config* cfg, const slf_dataset* ds,
                     const char* log_csv_path, slf_model** out) {
  if (auto s = require_arg(cfg && ds && out, "null argument")) return s;
  *out = nullptr;
  return guarded([&] {
    slf::TrainOutcome outcome = slf::train_model(cfg->cfg, ds->table);
    if (log_csv_path) {
      std::FILE* f = std::fopen(log_csv_path, "wb");
      if (!f) slf::fail(Status::Io, std::string("cannot write ") + log_csv_path);
      std::fwrite(outcome.log_csv.data(), 1, outcome.log_csv.size(), f);
      std::fclose(f);
    }
    *out = new slf_model{std::move(outcome.bundle)};
  });
}

slf_status slf_model_save(const slf_model* model, const char* path) {
  if (auto s = require_arg(model && path, "null argument")) return s;
  return guarded([&] { slf::save_bundle(model->bundle, path); });
}

slf_status slf_model_load(const char* path, slf_model** out) {
  if (auto s = require_arg(path && out, "null argument")) return s;
  *out = nullptr;
  return guarded([&] { *out = new slf_model{slf::load_bundle(path)}; });
}

void slf_model_free(slf_model* model) { delete model; }

const char* slf_model_kind(const slf_model* model) {
  return model ? model->bundle.kind.c_str() : nullptr;
}

size_t slf_model_horizon(const slf_model* model) {
  return model ? model->bundle.pre.horizon_steps : 0;
}

size_t slf_model_class_count(const slf_model* model) {
  return model ? model->bundle.appliances.size() : 0;
}

slf_status slf_evaluate(const slf_model* model, const slf_dataset* ds,
                        const char* out_dir) {
  if (auto s = require_arg(model && ds && out_dir, "null argument")) return s;
  return guarded([&] {
    slf::RunConfig cfg;
    cfg.set("out", out_dir);
    cfg.set("create", "true");
    const slf::EvalOutcome outcome =
        slf::evaluate_model(model->bundle, ds->table);
    const std::string dir = out_dir;
    slf::write_metric_reports(outcome.reports, dir + "/report.csv");
    for (std::size_t a = 0; a < outcome.reports.size(); ++a) {
      const std::string path =
          dir + "/pred_" + outcome.reports[a].appliance + ".csv";
      std::FILE* f = std::fopen(path.c_str(), "wb");
      if (!f) slf::fail(Status::Io, "cannot write " + path);
      std::fwrite(outcome.prediction_csvs[a].data(), 1,
                  outcome.prediction_csvs[a].size(), f);
      std::fclose(f);
    }
  });
}

slf_status slf_forecast(const slf_model* model, const slf_dataset* ds,
                        const char* appliance, double* out_watts,
                        size_t out_watts_len, double* out_probs,
                        size_t out_probs_len) {
  if (auto s = require_arg(model && ds && appliance && out_watts,
                           "null argument")) {
    return s;
  }
  return guarded([&] {
    const slf::ForecastOutcome outcome =
        slf::forecast_tail(model->bundle, ds->table, appliance);
    slf::require(out_watts_len >= outcome.watts.size(), Status::InvalidArgument,
                 "out_watts buffer smaller than the model horizon");
    for (std::size_t i = 0; i < outcome.watts.size(); ++i) {
      out_watts[i] = outcome.watts[i];
    }
    if (out_probs && !outcome.class_probs.empty()) {
      slf::require(out_probs_len >= outcome.class_probs.size(),
                   Status::InvalidArgument,
                   "out_probs buffer smaller than the class count");
      for (std::size_t i = 0; i < outcome.class_probs.size(); ++i) {
        out_probs[i] = outcome.class_probs[i];
      }
    }
  });
}

/* ---- command-level entry points ------------------------------------------ */

slf_status slf_run_synth(const slf_config* cfg) {
  if (auto s = require_arg(cfg != nullptr, "null config")) return s;
  return guarded([&] { slf::run_synth(cfg->cfg); });
}

slf_status slf_run_train(const slf_config* cfg) {
  if (auto s = require_arg(cfg != nullptr, "null config")) return s;
  return guarded([&] { slf::run_train(cfg->cfg); });
}

slf_status slf_run_evaluate(const slf_config* cfg) {
  if (auto s = require_arg(cfg != nullptr, "null config")) return s;
  return guarded([&] { slf::run_evaluate(cfg->cfg); });
}

slf_status slf_run_forecast(const slf_config* cfg, char** out_text) {
  if (auto s = require_arg(cfg && out_text, "null argument")) return s;
  *out_text = nullptr;
  return guarded([&] {
    const std::string text = slf::run_forecast(cfg->cfg);
    char* buf = static_cast<char*>(std::malloc(text.size() + 1));
    if (!buf) slf::fail(Status::Internal, "out of memory");
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *out_text = buf;
  });
}

slf_status slf_run_report(const char* const* report_paths, size_t count,
                          const slf_config* cfg) {
  if (auto s = require_arg(report_paths && cfg, "null argument")) return s;
  return guarded([&] {
    std::vector<std::string> inputs;
    for (size_t i = 0; i < count; ++i) {
      slf::require(report_paths[i] != nullptr, Status::InvalidArgument,
                   "null report path");
      inputs.emplace_back(report_paths[i]);
    }
    slf::run_report(inputs, cfg->cfg);
  });
}

void slf_string_free(char* s) { std::free(s); }

} /* extern "C" */

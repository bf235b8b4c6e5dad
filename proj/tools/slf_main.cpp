// slf — short-term appliance-level load forecasting CLI.
//
// Thin wrapper over the libslf C API: flags map 1:1 onto config keys, a
// config file supplies values under them, and the library does the work.

#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "slf.h"

namespace {

struct ConfigDeleter {
  void operator()(slf_config* c) const { slf_config_free(c); }
};
using ConfigPtr = std::unique_ptr<slf_config, ConfigDeleter>;

struct PendingValues {
  std::string config_path;
  std::vector<std::pair<std::string, std::string>> overrides;  // key, value
  std::vector<std::string> sets;                               // raw key=value
};

int fail_with(slf_status status) {
  std::fprintf(stderr, "error (%s): %s\n", slf_status_name(status),
               slf_last_error());
  return 1;
}

// Every known config key becomes a same-named flag; values land in `pending`
// so file values load first and explicit flags override them.
void add_key_flags(CLI::App* cmd, PendingValues& pending) {
  cmd->add_option_function<std::string>(
         "--config", [&pending](const std::string& v) { pending.config_path = v; },
         "run configuration file (key = value lines)")
      ->option_text("PATH");
  for (size_t i = 0; i < slf_config_known_key_count(); ++i) {
    const std::string key = slf_config_known_key(i);
    if (key == "create") continue;  // boolean flag added below
    std::string flag = "--" + key;
    if (key == "model_file") flag += ",--model-file";
    cmd->add_option_function<std::string>(
           flag,
           [&pending, key](const std::string& v) {
             pending.overrides.emplace_back(key, v);
           },
           "config key '" + key + "'")
        ->option_text("VALUE");
  }
  cmd->add_option_function<std::string>(
         "--set",
         [&pending](const std::string& v) { pending.sets.push_back(v); },
         "extra key=value pair (archetype keys etc.), repeatable")
      ->option_text("KEY=VALUE")
      ->take_all();
  cmd->add_flag_callback(
      "--create",
      [&pending] { pending.overrides.emplace_back("create", "true"); },
      "create the output directory if missing");
}

ConfigPtr build_config(const PendingValues& pending, slf_status& status) {
  ConfigPtr cfg(slf_config_new());
  status = SLF_OK;
  if (!pending.config_path.empty()) {
    status = slf_config_load_file(cfg.get(), pending.config_path.c_str());
    if (status != SLF_OK) return cfg;
  }
  for (const auto& [key, value] : pending.overrides) {
    status = slf_config_set(cfg.get(), key.c_str(), value.c_str());
    if (status != SLF_OK) return cfg;
  }
  for (const std::string& kv : pending.sets) {
    const size_t eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      std::fprintf(stderr, "error: --set wants KEY=VALUE, got '%s'\n",
                   kv.c_str());
      status = SLF_ERR_INVALID_ARGUMENT;
      return cfg;
    }
    status = slf_config_set(cfg.get(), kv.substr(0, eq).c_str(),
                            kv.substr(eq + 1).c_str());
    if (status != SLF_OK) return cfg;
  }
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"short-term appliance-level load forecasting"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(slf_version()));

  PendingValues pending;
  std::vector<std::string> report_inputs;

  CLI::App* synth = app.add_subcommand(
      "synth", "generate a deterministic synthetic household dataset");
  CLI::App* train =
      app.add_subcommand("train", "train a forecasting model on a dataset");
  CLI::App* evaluate = app.add_subcommand(
      "evaluate", "rolling hour-ahead evaluation on the test split");
  CLI::App* forecast = app.add_subcommand(
      "forecast", "hour-ahead forecast from the last 24 h of readings");
  CLI::App* report = app.add_subcommand(
      "report", "merge evaluation reports into one comparison table");
  report->add_option("inputs", report_inputs, "report.csv files to merge")
      ->required();

  for (CLI::App* cmd : {synth, train, evaluate, forecast, report}) {
    add_key_flags(cmd, pending);
  }

  CLI11_PARSE(app, argc, argv);

  slf_status status = SLF_OK;
  ConfigPtr cfg = build_config(pending, status);
  if (status != SLF_OK) return fail_with(status);

  if (synth->parsed()) {
    status = slf_run_synth(cfg.get());
  } else if (train->parsed()) {
    status = slf_run_train(cfg.get());
  } else if (evaluate->parsed()) {
    status = slf_run_evaluate(cfg.get());
  } else if (forecast->parsed()) {
    char* text = nullptr;
    status = slf_run_forecast(cfg.get(), &text);
    if (status == SLF_OK) {
      std::fputs(text, stdout);
      slf_string_free(text);
    }
  } else if (report->parsed()) {
    std::vector<const char*> paths;
    for (const std::string& p : report_inputs) paths.push_back(p.c_str());
    status = slf_run_report(paths.data(), paths.size(), cfg.get());
  }

  return status == SLF_OK ? 0 : fail_with(status);
}

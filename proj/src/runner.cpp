#include <algorithm>
#include <array>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include <json.hpp>

#include "slf/runner.hpp"

namespace slf {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void append_double(std::string& out, double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, ptr);
}

fs::path ensure_out_dir(const RunConfig& cfg) {
  const fs::path out = cfg.get_string("out");
  if (fs::exists(out)) {
    require(fs::is_directory(out), Status::Io,
            out.string() + " exists and is not a directory");
    return out;
  }
  if (!cfg.get_bool("create")) {
    fail(Status::Io, "output directory " + out.string() +
                         " does not exist (pass create = true / --create)");
  }
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec) fail(Status::Io, "cannot create " + out.string() + ": " + ec.message());
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(Status::Io, "cannot write " + path.string());
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!f) fail(Status::Io, "write failed for " + path.string());
}

double archetype_value(const RunConfig& cfg, const std::string& appliance,
                       const char* param, double fallback) {
  const std::string key = appliance + "." + param;
  return cfg.has(key) ? cfg.get_double(key) : fallback;
}

json archetype_to_json(const ApplianceArchetype& a) {
  json j = {{"name", a.name},
            {"kind", archetype_kind_name(a.kind)},
            {"on_watts", a.on_watts}};
  switch (a.kind) {
    case ArchetypeKind::Cycler:
      j["period_minutes"] = a.period_minutes;
      j["duty"] = a.duty;
      j["phase_jitter_minutes"] = a.phase_jitter_minutes;
      break;
    case ArchetypeKind::Event:
      j["events_per_day"] = a.events_per_day;
      j["event_duration_minutes"] = a.event_duration_minutes;
      break;
    case ArchetypeKind::Schedule:
      j["active_start_hour"] = a.active_start_hour;
      j["active_end_hour"] = a.active_end_hour;
      j["start_jitter_minutes"] = a.start_jitter_minutes;
      j["length_jitter_minutes"] = a.length_jitter_minutes;
      j["weekday_use_prob"] = a.weekday_use_prob;
      break;
  }
  return j;
}

}  // namespace

SynthSpec synth_spec_from_config(const RunConfig& cfg) {
  SynthSpec spec;
  spec.days = static_cast<int>(cfg.get_int("synth_days"));
  spec.step_minutes = static_cast<int>(cfg.get_int("synth_step_minutes"));
  spec.gap_fraction = cfg.get_double("synth_gap_fraction");
  spec.seed = cfg.get_uint("seed");

  if (!cfg.has("appliances")) {
    spec.appliances = default_roster();
    return spec;
  }

  // Custom roster: each appliance takes its parameters from "<name>.<param>"
  // keys, falling back to the archetype defaults.
  for (const std::string& name : cfg.get_list("appliances")) {
    ApplianceArchetype a;
    a.name = name;
    require(cfg.has(name + ".kind"), Status::InvalidArgument,
            "synth: missing key " + name + ".kind");
    a.kind = archetype_kind_from_string(cfg.get_string(name + ".kind"));
    a.on_watts = archetype_value(cfg, name, "on_watts", a.on_watts);
    a.period_minutes = archetype_value(cfg, name, "period_minutes", a.period_minutes);
    a.duty = archetype_value(cfg, name, "duty", a.duty);
    a.phase_jitter_minutes =
        archetype_value(cfg, name, "phase_jitter_minutes", a.phase_jitter_minutes);
    a.events_per_day = archetype_value(cfg, name, "events_per_day", a.events_per_day);
    a.event_duration_minutes = archetype_value(cfg, name, "event_duration_minutes",
                                               a.event_duration_minutes);
    a.active_start_hour =
        archetype_value(cfg, name, "active_start_hour", a.active_start_hour);
    a.active_end_hour =
        archetype_value(cfg, name, "active_end_hour", a.active_end_hour);
    a.start_jitter_minutes =
        archetype_value(cfg, name, "start_jitter_minutes", a.start_jitter_minutes);
    a.length_jitter_minutes =
        archetype_value(cfg, name, "length_jitter_minutes", a.length_jitter_minutes);
    if (cfg.has(name + ".weekday_use_prob")) {
      const std::vector<std::string> probs = cfg.get_list(name + ".weekday_use_prob");
      require(probs.size() == 7, Status::InvalidArgument,
              "synth: " + name + ".weekday_use_prob needs 7 values (Monday first)");
      for (std::size_t d = 0; d < 7; ++d) a.weekday_use_prob[d] = std::stod(probs[d]);
    }
    a.validate();
    spec.appliances.push_back(std::move(a));
  }
  return spec;
}

void run_synth(const RunConfig& cfg) {
  cfg.validate_keys();
  const SynthSpec spec = synth_spec_from_config(cfg);
  const fs::path out = ensure_out_dir(cfg);
  const std::string building = cfg.get_string("building");

  const TimeSeriesTable table = compose_building(spec);
  const fs::path csv_path = out / (building + ".csv");
  write_csv(table, csv_path.string());

  json manifest = {
      {"building", building},
      {"seed", spec.seed},
      {"days", spec.days},
      {"step_minutes", spec.step_minutes},
      {"gap_fraction", spec.gap_fraction},
      {"start_timestamp", spec.start_timestamp},
      {"archetypes", json::array()},
  };
  for (const ApplianceArchetype& a : spec.appliances) {
    manifest["archetypes"].push_back(archetype_to_json(a));
  }
  write_text(out / (building + ".manifest.json"), manifest.dump(2) + "\n");

  std::fprintf(stderr, "[synth] wrote %s (%zu rows, %zu appliances)\n",
               csv_path.string().c_str(), table.rows(), table.cols());
}

void run_train(const RunConfig& cfg) {
  cfg.validate_keys();
  require(cfg.has("data"), Status::InvalidArgument,
          "train: data = <csv path> is required");
  const fs::path out = ensure_out_dir(cfg);
  const TimeSeriesTable raw = parse_csv(cfg.get_string("data"));

  TrainOutcome outcome = train_model(cfg, raw);

  const fs::path model_path = out / "model.lsq";
  save_bundle(outcome.bundle, model_path.string());
  write_text(out / "train_log.csv", outcome.log_csv);
  write_normalizer_stats(outcome.bundle.norm,
                         (out / "normalizer_stats.csv").string());
  std::fprintf(stderr,
               "[train] wrote %s (best epoch %d, val loss %.6g, %d epochs)\n",
               model_path.string().c_str(), outcome.best_epoch,
               outcome.best_val_loss, outcome.epochs_run);
}

namespace {

// Pipeline keys must agree with the trained model when the user overrode
// them; untouched defaults follow the model.
void check_eval_config(const RunConfig& cfg, const ModelBundle& bundle) {
  const RunConfig defaults;
  auto changed = [&](const char* key) {
    return cfg.get_string(key) != defaults.get_string(key);
  };
  if (changed("building") && cfg.get_string("building") != bundle.building) {
    fail(Status::Mismatch, "config/model mismatch on field 'building': config " +
                               cfg.get_string("building") + ", model " +
                               bundle.building);
  }
  struct KeyCheck {
    const char* key;
    double model_value;
  };
  const KeyCheck checks[] = {
      {"resample_minutes", static_cast<double>(bundle.pre.resample_minutes)},
      {"input_steps", static_cast<double>(bundle.pre.input_steps)},
      {"horizon_steps", static_cast<double>(bundle.pre.horizon_steps)},
      {"train_ratio", bundle.pre.train_ratio},
      {"val_ratio", bundle.pre.val_ratio},
      {"test_ratio", bundle.pre.test_ratio},
  };
  for (const KeyCheck& c : checks) {
    if (changed(c.key) && cfg.get_double(c.key) != c.model_value) {
      fail(Status::Mismatch, std::string("config/model mismatch on field '") +
                                 c.key + "': config " + cfg.get_string(c.key));
    }
  }
}

}  // namespace

void run_evaluate(const RunConfig& cfg) {
  cfg.validate_keys();
  require(cfg.has("model_file"), Status::InvalidArgument,
          "evaluate: model_file = <path> is required");
  require(cfg.has("data"), Status::InvalidArgument,
          "evaluate: data = <csv path> is required");
  const fs::path out = ensure_out_dir(cfg);

  const ModelBundle bundle = load_bundle(cfg.get_string("model_file"));
  check_eval_config(cfg, bundle);
  const TimeSeriesTable raw = parse_csv(cfg.get_string("data"));

  const EvalOutcome outcome = evaluate_model(bundle, raw);
  write_metric_reports(outcome.reports, (out / "report.csv").string());
  for (std::size_t a = 0; a < outcome.reports.size(); ++a) {
    write_text(out / ("pred_" + outcome.reports[a].appliance + ".csv"),
               outcome.prediction_csvs[a]);
  }
  std::fprintf(stderr, "[evaluate] wrote %s (%zu appliances, model %s)\n",
               (out / "report.csv").string().c_str(), outcome.reports.size(),
               bundle.kind.c_str());
}

std::string run_forecast(const RunConfig& cfg) {
  cfg.validate_keys();
  require(cfg.has("model_file"), Status::InvalidArgument,
          "forecast: model_file = <path> is required");
  require(cfg.has("data"), Status::InvalidArgument,
          "forecast: data = <csv path> is required");
  require(cfg.has("appliance"), Status::InvalidArgument,
          "forecast: appliance = <name> is required");

  const ModelBundle bundle = load_bundle(cfg.get_string("model_file"));
  const TimeSeriesTable raw = parse_csv(cfg.get_string("data"));
  const ForecastOutcome outcome =
      forecast_tail(bundle, raw, cfg.get_string("appliance"));

  std::string text;
  for (std::size_t j = 0; j < outcome.watts.size(); ++j) {
    text += "forecast," + format_timestamp(outcome.timestamps[j]) + ",";
    append_double(text, outcome.watts[j]);
    text += '\n';
  }
  for (std::size_t c = 0; c < outcome.class_probs.size(); ++c) {
    text += "prob," + bundle.appliances[c] + ",";
    append_double(text, outcome.class_probs[c]);
    text += '\n';
  }
  return text;
}

void run_report(const std::vector<std::string>& inputs, const RunConfig& cfg) {
  cfg.validate_keys();
  require(!inputs.empty(), Status::InvalidArgument,
          "report: at least one input report is required");
  const fs::path out = ensure_out_dir(cfg);

  std::vector<MetricReport> rows;
  std::set<std::array<std::string, 3>> seen;
  for (const std::string& path : inputs) {
    for (MetricReport& r : read_metric_reports(path)) {
      const std::array<std::string, 3> key{r.building, r.appliance, r.model};
      if (!seen.insert(key).second) {
        fail(Status::InvalidArgument,
             "report: duplicate row for (" + r.building + ", " + r.appliance +
                 ", " + r.model + ")");
      }
      rows.push_back(std::move(r));
    }
  }

  std::sort(rows.begin(), rows.end(), [](const MetricReport& a,
                                         const MetricReport& b) {
    return std::tie(a.building, a.appliance, a.model) <
           std::tie(b.building, b.appliance, b.model);
  });

  std::string text =
      "building,appliance,model,rmse,rmse_best,nrmse,nrmse_best,mae,mae_best,"
      "samples\n";
  std::size_t group_start = 0;
  while (group_start < rows.size()) {
    std::size_t group_end = group_start;
    while (group_end < rows.size() &&
           rows[group_end].building == rows[group_start].building &&
           rows[group_end].appliance == rows[group_start].appliance) {
      ++group_end;
    }
    // lowest value wins; ties go to the lexicographically first model, which
    // the sort above already guarantees for strict '<' comparisons.
    std::size_t best_rmse = group_start, best_nrmse = group_start,
                best_mae = group_start;
    for (std::size_t i = group_start + 1; i < group_end; ++i) {
      if (rows[i].rmse < rows[best_rmse].rmse) best_rmse = i;
      if (rows[i].nrmse < rows[best_nrmse].nrmse) best_nrmse = i;
      if (rows[i].mae < rows[best_mae].mae) best_mae = i;
    }
    for (std::size_t i = group_start; i < group_end; ++i) {
      text += rows[i].building + "," + rows[i].appliance + "," + rows[i].model + ",";
      append_double(text, rows[i].rmse);
      text += i == best_rmse ? ",1," : ",0,";
      append_double(text, rows[i].nrmse);
      text += i == best_nrmse ? ",1," : ",0,";
      append_double(text, rows[i].mae);
      text += i == best_mae ? ",1," : ",0,";
      text += std::to_string(rows[i].sample_count);
      text += '\n';
    }
    group_start = group_end;
  }
  write_text(out / "comparison.csv", text);
  std::fprintf(stderr, "[report] wrote %s (%zu rows)\n",
               (out / "comparison.csv").string().c_str(), rows.size());
}

}  // namespace slf

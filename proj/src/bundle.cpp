#include <json.hpp>

#include "slf/model_io.hpp"
#include "slf/runner.hpp"

namespace slf {

namespace {

using nlohmann::json;

void collect_varma(VarmaModel& m, ParamRefs& out) {
  out.push_back({"varma.intercept", m.intercept.size(), 1, m.intercept.data()});
  for (std::size_t i = 0; i < m.ar_coeffs.size(); ++i) {
    out.push_back({"varma.ar" + std::to_string(i), m.ar_coeffs[i].rows,
                   m.ar_coeffs[i].cols, m.ar_coeffs[i].data.data()});
  }
  for (std::size_t i = 0; i < m.ma_coeffs.size(); ++i) {
    out.push_back({"varma.ma" + std::to_string(i), m.ma_coeffs[i].rows,
                   m.ma_coeffs[i].cols, m.ma_coeffs[i].data.data()});
  }
  out.push_back({"varma.long_intercept", m.long_intercept.size(), 1,
                 m.long_intercept.data()});
  for (std::size_t i = 0; i < m.long_ar.size(); ++i) {
    out.push_back({"varma.long_ar" + std::to_string(i), m.long_ar[i].rows,
                   m.long_ar[i].cols, m.long_ar[i].data.data()});
  }
}

ParamRefs collect_bundle(ModelBundle& bundle) {
  ParamRefs refs;
  if (bundle.seq2seq) {
    bundle.seq2seq->collect(refs);
  } else if (bundle.lstm) {
    bundle.lstm->collect(refs);
  } else if (!bundle.conv.empty()) {
    for (std::size_t i = 0; i < bundle.conv.size(); ++i) {
      ParamRefs sub;
      bundle.conv[i].collect(sub);
      for (ParamRef& r : sub) {
        r.name = bundle.appliances[i] + "." + r.name;
        refs.push_back(r);
      }
    }
  } else if (bundle.varma) {
    collect_varma(*bundle.varma, refs);
  } else {
    fail(Status::Internal, "bundle has no model attached");
  }
  return refs;
}

json pre_to_json(const PreprocessConfig& pre) {
  return json{{"resample_minutes", pre.resample_minutes},
              {"input_steps", pre.input_steps},
              {"horizon_steps", pre.horizon_steps},
              {"stride", pre.stride},
              {"train_ratio", pre.train_ratio},
              {"val_ratio", pre.val_ratio},
              {"test_ratio", pre.test_ratio}};
}

PreprocessConfig pre_from_json(const json& j) {
  PreprocessConfig pre;
  pre.resample_minutes = j.at("resample_minutes").get<int>();
  pre.input_steps = j.at("input_steps").get<std::size_t>();
  pre.horizon_steps = j.at("horizon_steps").get<std::size_t>();
  pre.stride = j.at("stride").get<std::size_t>();
  pre.train_ratio = j.at("train_ratio").get<double>();
  pre.val_ratio = j.at("val_ratio").get<double>();
  pre.test_ratio = j.at("test_ratio").get<double>();
  return pre;
}

}  // namespace

void save_bundle(const ModelBundle& bundle, const std::string& path) {
  json config = {
      {"building", bundle.building},
      {"appliances", bundle.appliances},
      {"pre", pre_to_json(bundle.pre)},
      {"norm_min", bundle.norm.min_watts},
      {"norm_max", bundle.norm.max_watts},
  };
  if (bundle.seq2seq) {
    config["hidden"] = bundle.seq2seq->cfg.hidden;
    config["lambda_dec"] = bundle.seq2seq->cfg.lambda_dec;
    config["lambda_cls"] = bundle.seq2seq->cfg.lambda_cls;
  } else if (bundle.lstm) {
    config["hidden"] = bundle.lstm->hidden;
  } else if (!bundle.conv.empty()) {
    config["conv_channels"] = bundle.conv.front().channels;
    config["conv_kernel_width"] = bundle.conv.front().kernel_width;
    config["conv_dilations"] = bundle.conv.front().dilations;
  } else if (bundle.varma) {
    config["varma_p"] = bundle.varma->p;
    config["varma_q"] = bundle.varma->q;
    config["varma_long_order"] = bundle.varma->long_order;
    config["spectral_radius"] = bundle.varma->spectral_radius;
    config["residual_history"] = bundle.varma->residual_history;
  }

  // collect() needs mutable access; saving does not modify values.
  ModelBundle& mutable_bundle = const_cast<ModelBundle&>(bundle);
  save_model_file(path, bundle.kind, config, collect_bundle(mutable_bundle));
}

ModelBundle load_bundle(const std::string& path) {
  const LoadedModelFile file = load_model_file(path);
  ModelBundle bundle;
  bundle.kind = file.kind;
  try {
    const json& config = file.config;
    bundle.building = config.at("building").get<std::string>();
    bundle.appliances = config.at("appliances").get<std::vector<std::string>>();
    bundle.pre = pre_from_json(config.at("pre"));
    bundle.norm.appliances = bundle.appliances;
    bundle.norm.min_watts = config.at("norm_min").get<std::vector<double>>();
    bundle.norm.max_watts = config.at("norm_max").get<std::vector<double>>();

    if (file.kind == "seq2seq") {
      Seq2SeqConfig cfg;
      cfg.input_features = 8;
      cfg.hidden = config.at("hidden").get<std::size_t>();
      cfg.horizon = bundle.pre.horizon_steps;
      cfg.num_classes = bundle.appliances.size();
      cfg.lambda_dec = config.at("lambda_dec").get<double>();
      cfg.lambda_cls = config.at("lambda_cls").get<double>();
      bundle.seq2seq = Seq2SeqParams(cfg);
    } else if (file.kind == "lstm") {
      bundle.lstm = LstmBaselineParams(8 + bundle.appliances.size(),
                                       config.at("hidden").get<std::size_t>(),
                                       bundle.pre.horizon_steps);
    } else if (file.kind == "conv1d") {
      const auto channels = config.at("conv_channels").get<std::size_t>();
      const auto kw = config.at("conv_kernel_width").get<std::size_t>();
      const auto dilations =
          config.at("conv_dilations").get<std::vector<std::size_t>>();
      for (std::size_t i = 0; i < bundle.appliances.size(); ++i) {
        bundle.conv.emplace_back(8, channels, kw, dilations,
                                 bundle.pre.horizon_steps);
      }
    } else if (file.kind == "varma") {
      VarmaModel m;
      m.p = config.at("varma_p").get<std::size_t>();
      m.q = config.at("varma_q").get<std::size_t>();
      m.long_order = config.at("varma_long_order").get<std::size_t>();
      m.k = bundle.appliances.size();
      m.intercept.assign(m.k, 0.0);
      m.ar_coeffs.assign(m.p, Array2D(m.k, m.k));
      m.ma_coeffs.assign(m.q, Array2D(m.k, m.k));
      m.long_intercept.assign(m.k, 0.0);
      m.long_ar.assign(m.long_order, Array2D(m.k, m.k));
      m.residual_history =
          config.at("residual_history").get<std::vector<std::vector<double>>>();
      m.spectral_radius = config.at("spectral_radius").get<double>();
      bundle.varma = std::move(m);
    } else {
      fail(Status::Format, path + ": unknown model kind '" + file.kind + "'");
    }
  } catch (const json::exception& e) {
    fail(Status::Format, path + ": bad model metadata: " + e.what());
  }
  restore_params(file, collect_bundle(bundle));
  return bundle;
}

}  // namespace slf

#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "galaxyml/csv.hpp"
#include "galaxyml/errors.hpp"
#include "galaxyml/eval.hpp"
#include "galaxyml/knn.hpp"
#include "galaxyml/mlp.hpp"

namespace galaxyml {

inline constexpr int kFormatVersion = 1;

using Json = nlohmann::json;

inline std::string activation_name(Activation activation) {
  switch (activation) {
    case Activation::kRelu:
      return "relu";
    case Activation::kSigmoid:
      return "sigmoid";
    case Activation::kTanh:
      return "tanh";
    case Activation::kIdentity:
      return "identity";
  }
  return "relu";
}

inline Activation parse_activation(const std::string& name) {
  if (name == "relu") return Activation::kRelu;
  if (name == "sigmoid") return Activation::kSigmoid;
  if (name == "tanh") return Activation::kTanh;
  if (name == "identity") return Activation::kIdentity;
  throw SchemaError("unknown activation '" + name + "'");
}

inline std::string optimizer_name(OptimizerKind optimizer) {
  return optimizer == OptimizerKind::kAdam ? "adam" : "sgd";
}

inline OptimizerKind parse_optimizer(const std::string& name) {
  if (name == "adam") return OptimizerKind::kAdam;
  if (name == "sgd") return OptimizerKind::kSgd;
  throw SchemaError("unknown optimizer '" + name + "'");
}

inline std::string metric_name(SelectionMetric metric) {
  return metric == SelectionMetric::kAccuracy ? "accuracy" : "mse";
}

inline void write_json_file(const Json& document, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << document.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  Json document;
  try {
    in >> document;
  } catch (const Json::parse_error& e) {
    throw SchemaError("invalid JSON in '" + path + "': " + e.what());
  }
  return document;
}

// ---- schema config ----

inline SchemaConfig schema_from_json(const Json& document) {
  SchemaConfig schema;
  if (document.contains("id_column")) {
    schema.id_column = document.at("id_column").get<std::string>();
  }
  if (document.contains("feature_columns")) {
    schema.feature_columns =
        document.at("feature_columns").get<std::vector<std::string>>();
    if (schema.feature_columns.empty()) {
      throw SchemaError("schema: feature_columns must not be empty");
    }
  }
  if (document.contains("flag_columns")) {
    const auto flags =
        document.at("flag_columns").get<std::vector<std::string>>();
    if (flags.size() != 3) {
      throw SchemaError(
          "schema: flag_columns must list exactly the spiral, elliptical and "
          "uncertain columns");
    }
    schema.flag_columns = {flags[0], flags[1], flags[2]};
  }
  return schema;
}

inline SchemaConfig load_schema_config(const std::string& path) {
  return schema_from_json(read_json_file(path));
}

// ---- ingestion report ----

inline Json ingest_report_to_json(const IngestReport& report) {
  Json rejected = Json::array();
  for (const RejectedRow& row : report.rejected) {
    rejected.push_back({{"line", row.line}, {"reason", row.reason}});
  }
  return Json{{"format_version", kFormatVersion},
              {"rows_read", report.rows_read},
              {"rows_rejected", report.rows_rejected},
              {"rejected", rejected},
              {"class_counts", report.class_counts}};
}

// ---- model persistence ----

inline Json knn_summary_json(const KnnModel& model) {
  return Json{{"format_version", kFormatVersion},
              {"model", "knn"},
              {"n", model.size()},
              {"d", model.dim()},
              {"k", model.k},
              {"metric", "euclidean"}};
}

inline Json mlp_model_to_json(const MlpModel& model) {
  Json layers = Json::array();
  for (const DenseLayer& layer : model.params.layers) {
    const std::size_t out_dim = layer.weights.size();
    const std::size_t in_dim = layer.weights.empty() ? 0 : layer.weights.front().size();
    std::vector<double> flat;
    flat.reserve(out_dim * in_dim);
    for (const Vector& row : layer.weights) {
      flat.insert(flat.end(), row.begin(), row.end());
    }
    layers.push_back({{"rows", out_dim},
                      {"cols", in_dim},
                      {"weights", flat},
                      {"biases", layer.biases}});
  }
  return Json{{"format_version", kFormatVersion},
              {"model", "mlp"},
              {"architecture",
               {{"input_dim", model.architecture.input_dim},
                {"hidden_dims", model.architecture.hidden_dims},
                {"output_dim", model.architecture.output_dim},
                {"hidden_activation",
                 activation_name(model.architecture.hidden_activation)}}},
              {"layers", layers},
              {"optimizer", optimizer_name(model.optimizer)},
              {"seed", model.seed}};
}

inline MlpModel mlp_model_from_json(const Json& document) {
  MlpModel model;
  const Json& architecture = document.at("architecture");
  model.architecture.input_dim = architecture.at("input_dim").get<int>();
  model.architecture.hidden_dims =
      architecture.at("hidden_dims").get<std::vector<int>>();
  model.architecture.output_dim = architecture.at("output_dim").get<int>();
  model.architecture.hidden_activation =
      parse_activation(architecture.at("hidden_activation").get<std::string>());
  model.optimizer = parse_optimizer(document.at("optimizer").get<std::string>());
  model.seed = document.at("seed").get<std::uint64_t>();

  for (const Json& layer_json : document.at("layers")) {
    const auto rows = layer_json.at("rows").get<std::size_t>();
    const auto cols = layer_json.at("cols").get<std::size_t>();
    const auto flat = layer_json.at("weights").get<std::vector<double>>();
    if (flat.size() != rows * cols) {
      throw SchemaError("mlp model: weight array size does not match shape");
    }
    DenseLayer layer;
    layer.weights.assign(rows, Vector(cols, 0.0));
    for (std::size_t o = 0; o < rows; ++o) {
      for (std::size_t i = 0; i < cols; ++i) {
        layer.weights[o][i] = flat[o * cols + i];
      }
    }
    layer.biases = layer_json.at("biases").get<Vector>();
    if (layer.biases.size() != rows) {
      throw SchemaError("mlp model: bias length does not match shape");
    }
    model.params.layers.push_back(std::move(layer));
  }
  if (model.params.layers.empty()) {
    throw SchemaError("mlp model: no layers");
  }
  return model;
}

inline void save_mlp_model(const MlpModel& model, const std::string& path) {
  write_json_file(mlp_model_to_json(model), path);
}

inline MlpModel load_mlp_model(const std::string& path) {
  return mlp_model_from_json(read_json_file(path));
}

// ---- evaluation reports ----

inline Json eval_report_to_json(const EvalReport& report) {
  return Json{{"accuracy", report.accuracy},
              {"confusion", report.confusion},
              {"n_evaluated", report.n_evaluated}};
}

inline EvalReport eval_report_from_json(const Json& document) {
  EvalReport report;
  report.accuracy = document.at("accuracy").get<double>();
  report.confusion =
      document.at("confusion").get<std::vector<std::vector<int>>>();
  report.n_evaluated = document.at("n_evaluated").get<std::size_t>();
  return report;
}

inline Json comparison_to_json(const ComparisonReport& report) {
  Json models = Json::array();
  for (const ModelReport& model : report.models) {
    Json entry{{"name", model.name},
               {"train_accuracy", model.train_accuracy},
               {"test_accuracy", model.eval.accuracy},
               {"eval", eval_report_to_json(model.eval)}};
    if (model.best_accuracy.has_value()) {
      entry["best_accuracy"] = *model.best_accuracy;
    }
    models.push_back(std::move(entry));
  }
  return Json{{"format_version", kFormatVersion}, {"models", models}};
}

inline ComparisonReport comparison_from_json(const Json& document) {
  ComparisonReport report;
  for (const Json& entry : document.at("models")) {
    ModelReport model;
    model.name = entry.at("name").get<std::string>();
    model.train_accuracy = entry.at("train_accuracy").get<double>();
    model.eval = eval_report_from_json(entry.at("eval"));
    if (entry.contains("best_accuracy")) {
      model.best_accuracy = entry.at("best_accuracy").get<double>();
    }
    report.models.push_back(std::move(model));
  }
  return report;
}

inline Json importance_report_to_json(const ImportanceReport& report,
                                      const std::vector<std::string>& names) {
  Json features = Json::array();
  for (std::size_t f = 0; f < report.importances.size(); ++f) {
    features.push_back(
        {{"feature", f < names.size() ? names[f] : "f" + std::to_string(f)},
         {"importance", report.importances[f]}});
  }
  return Json{{"format_version", kFormatVersion},
              {"repeats", report.repeats},
              {"seed", report.seed},
              {"importances", features}};
}

}  // namespace galaxyml

#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "galaxyml/csv.hpp"
#include "galaxyml/dataset.hpp"
#include "galaxyml/errors.hpp"
#include "galaxyml/eval.hpp"
#include "galaxyml/json_io.hpp"
#include "galaxyml/knn.hpp"
#include "galaxyml/mlp.hpp"

namespace galaxyml {

// Everything a command needs, assembled from the JSON config file plus
// command-line overrides. Every random decision flows from the explicit
// seeds below; nothing is wall-clock seeded.
struct RunConfig {
  std::string input_path;
  std::string schema_path;  // empty selects the built-in Galaxy Zoo schema
  std::string model = "both";
  std::string out_dir = "out";

  SplitSpec split;

  // knn
  int knn_k = 5;
  std::vector<int> knn_grid = default_k_grid();
  double knn_holdout_fraction = 0.25;

  // mlp
  MlpArchitecture mlp_architecture;
  TrainConfig mlp_train;

  // randomized search (mlp)
  RandomSearchSpec mlp_search;

  // synth
  std::size_t synth_n = 6000;
  double synth_spread = 0.25;
  std::uint64_t synth_seed = 17;
  std::string synth_out = "synthetic.csv";

  // compat
  int fill_missing_label = -1;  // < 0 disables the fill class
  bool mse_selection = false;
};

namespace detail {

inline void load_train_config(const Json& node, TrainConfig& config) {
  if (node.contains("optimizer")) {
    config.optimizer = parse_optimizer(node.at("optimizer").get<std::string>());
  }
  if (node.contains("learning_rate")) {
    config.learning_rate = node.at("learning_rate").get<double>();
  }
  if (node.contains("lambda")) config.lambda = node.at("lambda").get<double>();
  if (node.contains("epochs")) config.epochs = node.at("epochs").get<int>();
  if (node.contains("batch_size")) {
    config.batch_size = node.at("batch_size").get<int>();
  }
  if (node.contains("seed")) {
    config.seed = node.at("seed").get<std::uint64_t>();
  }
}

}  // namespace detail

inline RunConfig run_config_from_json(const Json& document) {
  RunConfig config;
  if (document.contains("input")) {
    config.input_path = document.at("input").get<std::string>();
  }
  if (document.contains("schema")) {
    config.schema_path = document.at("schema").get<std::string>();
  }
  if (document.contains("model")) {
    config.model = document.at("model").get<std::string>();
  }
  if (document.contains("out_dir")) {
    config.out_dir = document.at("out_dir").get<std::string>();
  }
  if (document.contains("split")) {
    const Json& node = document.at("split");
    if (node.contains("train_fraction")) {
      config.split.train_fraction = node.at("train_fraction").get<double>();
    }
    if (node.contains("seed")) {
      config.split.seed = node.at("seed").get<std::uint64_t>();
    }
  }
  if (document.contains("knn")) {
    const Json& node = document.at("knn");
    if (node.contains("k")) config.knn_k = node.at("k").get<int>();
    if (node.contains("k_values")) {
      config.knn_grid = node.at("k_values").get<std::vector<int>>();
    } else if (node.contains("k_max")) {
      const int k_max = node.at("k_max").get<int>();
      const int k_min = node.contains("k_min") ? node.at("k_min").get<int>() : 1;
      config.knn_grid.clear();
      for (int k = k_min; k <= k_max; ++k) config.knn_grid.push_back(k);
    }
    if (node.contains("holdout_fraction")) {
      config.knn_holdout_fraction = node.at("holdout_fraction").get<double>();
    }
  }
  if (document.contains("mlp")) {
    const Json& node = document.at("mlp");
    if (node.contains("hidden_dims")) {
      config.mlp_architecture.hidden_dims =
          node.at("hidden_dims").get<std::vector<int>>();
    }
    if (node.contains("activation")) {
      config.mlp_architecture.hidden_activation =
          parse_activation(node.at("activation").get<std::string>());
    }
    detail::load_train_config(node, config.mlp_train);
  }
  if (document.contains("search")) {
    const Json& node = document.at("search");
    if (node.contains("draws")) {
      config.mlp_search.draws = node.at("draws").get<int>();
    }
    if (node.contains("folds")) {
      config.mlp_search.folds = node.at("folds").get<int>();
    }
    if (node.contains("hidden_dims_choices")) {
      config.mlp_search.hidden_dims_choices =
          node.at("hidden_dims_choices").get<std::vector<std::vector<int>>>();
    }
    if (node.contains("activations")) {
      config.mlp_search.activation_choices.clear();
      for (const Json& name : node.at("activations")) {
        config.mlp_search.activation_choices.push_back(
            parse_activation(name.get<std::string>()));
      }
    }
    if (node.contains("optimizers")) {
      config.mlp_search.optimizer_choices.clear();
      for (const Json& name : node.at("optimizers")) {
        config.mlp_search.optimizer_choices.push_back(
            parse_optimizer(name.get<std::string>()));
      }
    }
    if (node.contains("seed")) {
      config.mlp_search.seed = node.at("seed").get<std::uint64_t>();
    }
    detail::load_train_config(node.contains("train") ? node.at("train") : Json::object(),
                              config.mlp_search.base);
  }
  if (document.contains("synth")) {
    const Json& node = document.at("synth");
    if (node.contains("n")) config.synth_n = node.at("n").get<std::size_t>();
    if (node.contains("spread")) {
      config.synth_spread = node.at("spread").get<double>();
    }
    if (node.contains("seed")) {
      config.synth_seed = node.at("seed").get<std::uint64_t>();
    }
    if (node.contains("out")) {
      config.synth_out = node.at("out").get<std::string>();
    }
  }
  if (document.contains("compat")) {
    const Json& node = document.at("compat");
    if (node.contains("fill_missing_label")) {
      config.fill_missing_label = node.at("fill_missing_label").get<int>();
    }
    if (node.contains("mse_selection")) {
      config.mse_selection = node.at("mse_selection").get<bool>();
    }
  }
  return config;
}

inline RunConfig load_run_config(const std::string& path) {
  return run_config_from_json(read_json_file(path));
}

namespace detail {

inline SchemaConfig resolve_schema(const RunConfig& config) {
  if (config.schema_path.empty()) return SchemaConfig{};
  return load_schema_config(config.schema_path);
}

inline int resolve_num_classes(const RunConfig& config) {
  return config.fill_missing_label >= 0
             ? std::max(kNumClasses, config.fill_missing_label + 1)
             : kNumClasses;
}

inline ParseResult ingest_dataset(const RunConfig& config) {
  if (config.input_path.empty()) {
    throw SchemaError("no input file configured (set \"input\" or --input)");
  }
  ParseOptions options;
  options.fill_missing_label = config.fill_missing_label;
  return parse_csv(config.input_path, resolve_schema(config), options);
}

inline void validate_model_selector(const std::string& model) {
  if (model != "knn" && model != "mlp" && model != "both") {
    throw SchemaError("invalid model selector '" + model +
                      "' (expected knn, mlp or both)");
  }
}

inline std::filesystem::path prepare_out_dir(const RunConfig& config) {
  const std::filesystem::path out_dir(config.out_dir);
  std::filesystem::create_directories(out_dir);
  return out_dir;
}

// The flag columns that drive the labels are thresholded from the vote
// and debiased-vote features, so held-out accuracy partly measures that
// dependence rather than model skill.
inline std::string label_leakage_warning() {
  return "labels derive from flag columns that are threshold functions of "
         "the vote/debiased-vote features; test accuracy may be inflated by "
         "label leakage";
}

}  // namespace detail

// Parse the input table, then write ingest_report.json and
// class_distribution.csv into the output directory.
inline IngestReport cmd_ingest(const RunConfig& config) {
  const ParseResult parsed = detail::ingest_dataset(config);
  const auto out_dir = detail::prepare_out_dir(config);
  write_json_file(ingest_report_to_json(parsed.report),
                  (out_dir / "ingest_report.json").string());
  write_class_distribution_csv(parsed.report.class_counts,
                               (out_dir / "class_distribution.csv").string());
  return parsed.report;
}

// Generate a blob dataset and write it in the ingestion schema, flags
// derived from the generating class.
inline void cmd_synth(const RunConfig& config) {
  const Dataset dataset =
      generate_synthetic(config.synth_n, default_synthetic_centers(),
                         config.synth_spread, config.synth_seed);
  const auto parent = std::filesystem::path(config.synth_out).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  write_csv(dataset, config.synth_out);
}

struct TrainSummary {
  ComparisonReport comparison;
  std::vector<std::string> warnings;
};

// Ingest, split, standardize on the training split only, train the
// selected model(s) and write models, evaluation reports and plot series.
inline TrainSummary cmd_train(const RunConfig& config) {
  detail::validate_model_selector(config.model);
  const bool run_knn = config.model != "mlp";
  const bool run_mlp = config.model != "knn";
  const int num_classes = detail::resolve_num_classes(config);

  const ParseResult parsed = detail::ingest_dataset(config);
  const auto [train_raw, test_raw] = split(parsed.dataset, config.split);
  const auto [train_set, stats] = standardize(train_raw);
  const Dataset test_set = apply_standardization(test_raw, stats);

  const auto out_dir = detail::prepare_out_dir(config);
  const bool both = run_knn && run_mlp;
  // Single-model runs use the plain names; both-model runs suffix them so
  // the artifacts do not collide (model_knn.json, confusion_mlp.csv, ...).
  const auto artifact_path = [&](const std::string& base,
                                 const std::string& model_name,
                                 const std::string& extension) {
    return (out_dir / (both ? base + "_" + model_name + extension
                            : base + extension))
        .string();
  };

  TrainSummary summary;
  summary.warnings.push_back(detail::label_leakage_warning());
  Json eval_models = Json::object();

  if (run_knn) {
    const KnnModel model = fit(train_set, config.knn_k);
    const double train_accuracy =
        accuracy(predict(model, train_set.features), train_set.labels);
    const EvalReport report = make_eval_report(
        predict(model, test_set.features), test_set.labels, num_classes);

    GridSearchSpec grid_spec;
    grid_spec.k_values = config.knn_grid;
    grid_spec.validation = test_set;
    const GridSearchResult grid = grid_search_k(train_set, grid_spec);

    const ImportanceReport importance = permutation_importance(
        [&model](const Matrix& x) { return predict(model, x); }, test_set, 5,
        derive_seed(config.split.seed, 101));

    write_json_file(knn_summary_json(model),
                    artifact_path("model", "knn", ".json"));
    write_grid_curve_csv(grid, (out_dir / "knn_grid.csv").string());
    write_confusion_csv(report.confusion,
                        artifact_path("confusion", "knn", ".csv"));
    write_importance_csv(importance, test_set.feature_names,
                         artifact_path("importance", "knn", ".csv"));

    ModelReport entry;
    entry.name = "knn";
    entry.train_accuracy = train_accuracy;
    entry.eval = report;
    entry.best_accuracy = grid.best_accuracy;
    summary.comparison.models.push_back(entry);

    Json node = eval_report_to_json(report);
    node["train_accuracy"] = train_accuracy;
    node["best_accuracy"] = grid.best_accuracy;
    node["best_k"] = grid.best_k;
    eval_models["knn"] = std::move(node);
  }

  if (run_mlp) {
    MlpArchitecture architecture = config.mlp_architecture;
    architecture.input_dim = static_cast<int>(train_set.dim());
    architecture.output_dim = num_classes;

    const auto [model, history] =
        train(train_set, architecture, config.mlp_train, &test_set);
    const double train_accuracy = history.accuracy.back();
    const EvalReport report = make_eval_report(
        predict(model, test_set.features), test_set.labels, num_classes);

    const ImportanceReport importance = permutation_importance(
        [&model](const Matrix& x) { return predict(model, x); }, test_set, 5,
        derive_seed(config.split.seed, 102));

    save_mlp_model(model, artifact_path("model", "mlp", ".json"));
    write_history_csv(history, (out_dir / "mlp_history.csv").string());
    write_confusion_csv(report.confusion,
                        artifact_path("confusion", "mlp", ".csv"));
    write_importance_csv(importance, test_set.feature_names,
                         artifact_path("importance", "mlp", ".csv"));

    ModelReport entry;
    entry.name = "mlp";
    entry.train_accuracy = train_accuracy;
    entry.eval = report;
    summary.comparison.models.push_back(entry);

    Json node = eval_report_to_json(report);
    node["train_accuracy"] = train_accuracy;
    node["final_loss"] = history.loss.back();
    eval_models["mlp"] = std::move(node);
  }

  write_json_file(Json{{"format_version", kFormatVersion},
                       {"warnings", summary.warnings},
                       {"models", eval_models}},
                  (out_dir / "eval.json").string());

  if (both) {
    const ComparisonReport comparison = compare_models(summary.comparison.models);
    write_json_file(comparison_to_json(comparison),
                    (out_dir / "comparison.json").string());
    summary.comparison = comparison;
  }
  return summary;
}

struct SearchSummary {
  std::optional<GridSearchResult> knn;
  std::optional<RandomSearchResult> mlp;
};

// Hyperparameter search on the training split only: exhaustive k grid for
// knn, randomized cross-validated search for mlp. Writes search.csv and
// best.json.
inline SearchSummary cmd_search(const RunConfig& config) {
  detail::validate_model_selector(config.model);
  if (config.model == "both") {
    throw SchemaError("search requires --model knn or --model mlp");
  }
  const int num_classes = detail::resolve_num_classes(config);

  const ParseResult parsed = detail::ingest_dataset(config);
  const auto [train_raw, test_raw] = split(parsed.dataset, config.split);
  const auto [train_set, stats] = standardize(train_raw);
  (void)test_raw;

  const auto out_dir = detail::prepare_out_dir(config);
  SearchSummary summary;

  if (config.model == "knn") {
    GridSearchSpec spec;
    spec.k_values = config.knn_grid;
    spec.holdout_fraction = config.knn_holdout_fraction;
    spec.holdout_seed = config.split.seed;
    const GridSearchResult result = grid_search_k(train_set, spec);

    std::ofstream out((out_dir / "search.csv").string());
    if (!out) throw std::runtime_error("cannot write search.csv");
    out << "k,accuracy,skipped\n";
    char buffer[48];
    for (int k : spec.k_values) {
      const auto it = std::find_if(result.curve.begin(), result.curve.end(),
                                   [k](const auto& p) { return p.first == k; });
      if (it == result.curve.end()) {
        out << k << ",nan,1\n";
      } else {
        std::snprintf(buffer, sizeof buffer, "%.12g", it->second);
        out << k << ',' << buffer << ",0\n";
      }
    }
    if (!out) throw std::runtime_error("write failed for search.csv");

    write_json_file(Json{{"format_version", kFormatVersion},
                         {"model", "knn"},
                         {"best_k", result.best_k},
                         {"best_accuracy", result.best_accuracy},
                         {"skipped_k", result.skipped}},
                    (out_dir / "best.json").string());
    summary.knn = result;
  } else {
    RandomSearchSpec spec = config.mlp_search;
    spec.base = config.mlp_train;
    spec.num_classes = num_classes;
    spec.selection_metric = config.mse_selection ? SelectionMetric::kMseOneHot
                                                 : SelectionMetric::kAccuracy;
    const RandomSearchResult result = randomized_search(train_set, spec);

    std::ofstream out((out_dir / "search.csv").string());
    if (!out) throw std::runtime_error("cannot write search.csv");
    out << "candidate,hidden_dims,activation,optimizer";
    for (int f = 0; f < spec.folds; ++f) out << ",fold_" << f;
    out << ",mean_score\n";
    char buffer[48];
    for (std::size_t c = 0; c < result.candidates.size(); ++c) {
      const CandidateScore& entry = result.candidates[c];
      out << c << ',';
      for (std::size_t i = 0; i < entry.candidate.hidden_dims.size(); ++i) {
        if (i) out << 'x';
        out << entry.candidate.hidden_dims[i];
      }
      out << ',' << activation_name(entry.candidate.activation) << ','
          << optimizer_name(entry.candidate.optimizer);
      for (double score : entry.fold_scores) {
        std::snprintf(buffer, sizeof buffer, "%.12g", score);
        out << ',' << buffer;
      }
      std::snprintf(buffer, sizeof buffer, "%.12g", entry.mean_score);
      out << ',' << buffer << '\n';
    }
    if (!out) throw std::runtime_error("write failed for search.csv");

    const CandidateScore& best = result.best();
    write_json_file(
        Json{{"format_version", kFormatVersion},
             {"model", "mlp"},
             {"selection_metric", metric_name(result.selection_metric)},
             {"best",
              {{"hidden_dims", best.candidate.hidden_dims},
               {"activation", activation_name(best.candidate.activation)},
               {"optimizer", optimizer_name(best.candidate.optimizer)}}},
             {"best_score", best.mean_score},
             {"warnings", result.warnings}},
        (out_dir / "best.json").string());
    summary.mlp = result;
  }
  return summary;
}

}  // namespace galaxyml

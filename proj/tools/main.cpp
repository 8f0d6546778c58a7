#include <cstdint>
#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "galaxyml/cli.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::string input;
  std::string schema;
  std::string model;
  std::string out;
  std::uint64_t seed = 0;
  int k = 0;
  int epochs = 0;
  int draws = 0;
  int folds = 0;
  std::size_t n = 0;
  double spread = 0.0;
  int fill_missing_label = -1;
  bool mse_selection = false;
};

// --seed is the run's master seed: it steers the split, the mlp training
// and the search in one go.
galaxyml::RunConfig build_config(const CLI::App& cmd, const Overrides& ov) {
  const auto passed = [&cmd](const std::string& name) {
    const CLI::Option* option = cmd.get_option_no_throw(name);
    return option != nullptr && option->count() > 0;
  };

  galaxyml::RunConfig config;
  if (!ov.config_path.empty()) {
    config = galaxyml::load_run_config(ov.config_path);
  }
  if (passed("--input")) config.input_path = ov.input;
  if (passed("--schema")) config.schema_path = ov.schema;
  if (passed("--model")) config.model = ov.model;
  if (passed("--out")) {
    config.out_dir = ov.out;
    config.synth_out = ov.out;
  }
  if (passed("--seed")) {
    config.split.seed = ov.seed;
    config.mlp_train.seed = ov.seed;
    config.mlp_search.seed = ov.seed;
    config.synth_seed = ov.seed;
  }
  if (passed("--k")) config.knn_k = ov.k;
  if (passed("--epochs")) {
    config.mlp_train.epochs = ov.epochs;
    config.mlp_search.base.epochs = ov.epochs;
  }
  if (passed("--draws")) config.mlp_search.draws = ov.draws;
  if (passed("--folds")) config.mlp_search.folds = ov.folds;
  if (passed("--n")) config.synth_n = ov.n;
  if (passed("--spread")) config.synth_spread = ov.spread;
  if (passed("--fill-missing-label")) {
    config.fill_missing_label = ov.fill_missing_label;
  }
  if (passed("--mse-selection")) config.mse_selection = ov.mse_selection;
  return config;
}

void add_common_options(CLI::App* cmd, Overrides& ov) {
  cmd->add_option("--config", ov.config_path, "JSON run configuration");
  cmd->add_option("--input", ov.input, "input CSV table");
  cmd->add_option("--schema", ov.schema, "JSON column-name mapping");
  cmd->add_option("--out", ov.out, "output directory");
  cmd->add_option("--seed", ov.seed, "master seed override");
  cmd->add_option("--fill-missing-label", ov.fill_missing_label,
                  "label rows with no flag set as this class (compat)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Galaxy morphology classifiers over Galaxy Zoo style tables"};
  app.require_subcommand(1);

  Overrides ov;

  CLI::App* ingest = app.add_subcommand(
      "ingest", "Parse a CSV table, derive labels, write the ingestion report");
  add_common_options(ingest, ov);

  CLI::App* train = app.add_subcommand(
      "train", "Split, standardize, train model(s) and write reports");
  add_common_options(train, ov);
  train->add_option("--model", ov.model, "knn, mlp or both");
  train->add_option("--k", ov.k, "knn neighbor count");
  train->add_option("--epochs", ov.epochs, "mlp training epochs");

  CLI::App* search = app.add_subcommand(
      "search", "Hyperparameter search on the training split");
  add_common_options(search, ov);
  search->add_option("--model", ov.model, "knn or mlp");
  search->add_option("--epochs", ov.epochs, "mlp epochs per candidate");
  search->add_option("--draws", ov.draws, "mlp configurations to sample");
  search->add_option("--folds", ov.folds, "cross-validation folds");
  search->add_flag("--mse-selection", ov.mse_selection,
                   "select by one-hot MSE instead of accuracy (compat)");

  CLI::App* synth = app.add_subcommand(
      "synth", "Generate a synthetic blob dataset in the ingestion schema");
  synth->add_option("--config", ov.config_path, "JSON run configuration");
  synth->add_option("--n", ov.n, "number of rows");
  synth->add_option("--spread", ov.spread, "per-dimension gaussian spread");
  synth->add_option("--seed", ov.seed, "generator seed");
  synth->add_option("--out", ov.out, "output CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (ingest->parsed()) {
      galaxyml::cmd_ingest(build_config(*ingest, ov));
    } else if (train->parsed()) {
      galaxyml::cmd_train(build_config(*train, ov));
    } else if (search->parsed()) {
      galaxyml::cmd_search(build_config(*search, ov));
    } else if (synth->parsed()) {
      galaxyml::cmd_synth(build_config(*synth, ov));
    }
  } catch (const galaxyml::SchemaError& e) {
    std::cerr << "error: schema: " << e.what() << std::endl;
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
  return 0;
}

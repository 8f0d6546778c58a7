#pragma once

#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "galaxyml/dataset.hpp"
#include "galaxyml/matrix.hpp"
#include "galaxyml/rng.hpp"

namespace galaxyml {

inline double accuracy(const std::vector<ClassLabel>& predicted,
                       const std::vector<ClassLabel>& actual) {
  require(!actual.empty(), "accuracy: empty inputs");
  require(predicted.size() == actual.size(), "accuracy: length mismatch");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < actual.size(); ++i) {
    if (predicted[i] == actual[i]) ++correct;
  }
  return double(correct) / double(actual.size());
}

// Entry (i, j) counts rows with actual class i predicted as class j.
inline std::vector<std::vector<int>> confusion_matrix(
    const std::vector<ClassLabel>& predicted,
    const std::vector<ClassLabel>& actual, int num_classes) {
  require(predicted.size() == actual.size(),
          "confusion_matrix: length mismatch");
  require(num_classes >= 1, "confusion_matrix: need at least one class");
  std::vector<std::vector<int>> counts(
      static_cast<std::size_t>(num_classes),
      std::vector<int>(static_cast<std::size_t>(num_classes), 0));
  for (std::size_t i = 0; i < actual.size(); ++i) {
    const ClassLabel a = actual[i];
    const ClassLabel p = predicted[i];
    require(a >= 0 && a < num_classes && p >= 0 && p < num_classes,
            "confusion_matrix: label out of range");
    ++counts[static_cast<std::size_t>(a)][static_cast<std::size_t>(p)];
  }
  return counts;
}

struct EvalReport {
  double accuracy = 0.0;
  std::vector<std::vector<int>> confusion;  // rows actual, columns predicted
  std::size_t n_evaluated = 0;
};

inline EvalReport make_eval_report(const std::vector<ClassLabel>& predicted,
                                   const std::vector<ClassLabel>& actual,
                                   int num_classes) {
  EvalReport report;
  report.accuracy = accuracy(predicted, actual);
  report.confusion = confusion_matrix(predicted, actual, num_classes);
  report.n_evaluated = actual.size();
  return report;
}

struct ImportanceReport {
  std::vector<double> importances;  // mean accuracy drop per feature
  int repeats = 5;
  std::uint64_t seed = 17;
};

using PredictFn = std::function<std::vector<ClassLabel>(const Matrix&)>;

// Permutation importance: mean accuracy drop over seed-deterministic
// shuffles of one feature column at a time.
inline ImportanceReport permutation_importance(const PredictFn& predict_fn,
                                               const Dataset& test,
                                               int repeats = 5,
                                               std::uint64_t seed = 17) {
  require(test.size() > 0, "permutation_importance: empty test set");
  require(repeats >= 1, "permutation_importance: repeats must be >= 1");

  const double baseline = accuracy(predict_fn(test.features), test.labels);
  const std::size_t n = test.size();
  const std::size_t d = test.dim();

  ImportanceReport report;
  report.repeats = repeats;
  report.seed = seed;
  report.importances.assign(d, 0.0);

  for (std::size_t f = 0; f < d; ++f) {
    double total_drop = 0.0;
    for (int rep = 0; rep < repeats; ++rep) {
      Rng rng(derive_seed(seed, f, static_cast<std::uint64_t>(rep)));
      Vector column(n);
      for (std::size_t i = 0; i < n; ++i) column[i] = test.features[i][f];
      rng.shuffle(column);
      Matrix permuted = test.features;
      for (std::size_t i = 0; i < n; ++i) permuted[i][f] = column[i];
      total_drop += baseline - accuracy(predict_fn(permuted), test.labels);
    }
    report.importances[f] = total_drop / double(repeats);
  }
  return report;
}

// One row of the side-by-side model table.
struct ModelReport {
  std::string name;
  double train_accuracy = 0.0;
  EvalReport eval;                      // held-out evaluation
  std::optional<double> best_accuracy;  // best score seen during search
};

struct ComparisonReport {
  std::vector<ModelReport> models;
};

inline ComparisonReport compare_models(const std::vector<ModelReport>& reports) {
  require(!reports.empty(), "compare_models: need at least one report");
  std::unordered_set<std::string> names;
  for (const ModelReport& report : reports) {
    require(names.insert(report.name).second,
            "compare_models: duplicate model identifier '" + report.name + "'");
  }
  return ComparisonReport{reports};
}

// feature,importance rows in feature order.
inline void write_importance_csv(const ImportanceReport& report,
                                 const std::vector<std::string>& feature_names,
                                 const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << "feature,importance\n";
  char buffer[48];
  for (std::size_t f = 0; f < report.importances.size(); ++f) {
    std::snprintf(buffer, sizeof buffer, "%.12g", report.importances[f]);
    out << (f < feature_names.size() ? feature_names[f]
                                     : "f" + std::to_string(f))
        << ',' << buffer << '\n';
  }
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

// Plain integer grid, rows = actual class, columns = predicted class.
inline void write_confusion_csv(const std::vector<std::vector<int>>& confusion,
                                const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  for (const auto& row : confusion) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out << ',';
      out << row[j];
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace galaxyml

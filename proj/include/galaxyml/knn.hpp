#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "galaxyml/dataset.hpp"
#include "galaxyml/eval.hpp"
#include "galaxyml/matrix.hpp"

namespace galaxyml {

enum class DistanceMetric { kEuclidean };

inline double euclidean_distance(const Vector& a, const Vector& b) {
  require(a.size() == b.size(), "euclidean_distance: length mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double diff = a[i] - b[i];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

// Lazy learner: fitting validates k and stores the training set. The
// stored matrix is expected to be standardized upstream and is treated as
// immutable afterwards.
struct KnnModel {
  Matrix training_features;
  std::vector<ClassLabel> training_labels;
  int k = 5;
  DistanceMetric metric = DistanceMetric::kEuclidean;

  std::size_t size() const { return training_features.size(); }
  std::size_t dim() const { return col_count(training_features); }
};

inline KnnModel fit(const Dataset& train, int k) {
  require(k >= 1 && static_cast<std::size_t>(k) <= train.size(),
          "fit: k must lie in [1, n]");
  return KnnModel{train.features, train.labels, k, DistanceMetric::kEuclidean};
}

struct Neighbor {
  std::size_t index = 0;
  double distance = 0.0;
};

// The k nearest training points, ascending by (distance, training index);
// distance ties therefore resolve to the lowest training index.
// exclude_index drops one training row, for self-match-free queries of the
// training set against itself.
inline std::vector<Neighbor> kneighbors(const KnnModel& model,
                                        const Vector& query, int k,
                                        std::ptrdiff_t exclude_index = -1) {
  const std::size_t n = model.size();
  const std::size_t available = exclude_index >= 0 ? n - 1 : n;
  require(k >= 1 && static_cast<std::size_t>(k) <= available,
          "kneighbors: k exceeds available training points");

  std::vector<Neighbor> all;
  all.reserve(available);
  for (std::size_t i = 0; i < n; ++i) {
    if (exclude_index >= 0 && i == static_cast<std::size_t>(exclude_index)) {
      continue;
    }
    all.push_back({i, euclidean_distance(model.training_features[i], query)});
  }
  const auto closer = [](const Neighbor& a, const Neighbor& b) {
    return a.distance < b.distance ||
           (a.distance == b.distance && a.index < b.index);
  };
  std::partial_sort(all.begin(), all.begin() + k, all.end(), closer);
  all.resize(static_cast<std::size_t>(k));
  return all;
}

// Most frequent label; ties resolve to the smallest class index.
inline ClassLabel majority_vote(const std::vector<ClassLabel>& labels) {
  require(!labels.empty(), "majority_vote: empty label list");
  ClassLabel max_label = 0;
  for (ClassLabel label : labels) {
    require(label >= 0, "majority_vote: negative label");
    max_label = std::max(max_label, label);
  }
  std::vector<int> counts(static_cast<std::size_t>(max_label) + 1, 0);
  for (ClassLabel label : labels) ++counts[static_cast<std::size_t>(label)];
  ClassLabel best = 0;
  for (ClassLabel c = 1; c <= max_label; ++c) {
    if (counts[static_cast<std::size_t>(c)] >
        counts[static_cast<std::size_t>(best)]) {
      best = c;
    }
  }
  return best;
}

inline std::vector<ClassLabel> predict(const KnnModel& model,
                                       const Matrix& queries) {
  if (queries.empty()) return {};
  require(col_count(queries) == model.dim(),
          "predict: query dimension does not match training data");
  std::vector<ClassLabel> predictions;
  predictions.reserve(queries.size());
  for (const Vector& query : queries) {
    const std::vector<Neighbor> neighbors = kneighbors(model, query, model.k);
    std::vector<ClassLabel> votes;
    votes.reserve(neighbors.size());
    for (const Neighbor& nb : neighbors) {
      votes.push_back(model.training_labels[nb.index]);
    }
    predictions.push_back(majority_vote(votes));
  }
  return predictions;
}

// Precomputed nearest-neighbor rows covering the largest k a later
// consumer needs; grid search slices the first k entries of each row.
// Row order matches the query order; each row is ascending by distance.
struct NeighborGraph {
  int k_max = 0;
  std::vector<std::vector<Neighbor>> rows;
};

inline NeighborGraph build_neighbor_graph(const KnnModel& model,
                                          const Matrix& queries, int k_max,
                                          bool exclude_self = false) {
  NeighborGraph graph;
  graph.k_max = k_max;
  graph.rows.reserve(queries.size());
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const std::ptrdiff_t exclude =
        exclude_self ? static_cast<std::ptrdiff_t>(i) : -1;
    graph.rows.push_back(kneighbors(model, queries[i], k_max, exclude));
  }
  return graph;
}

inline std::vector<ClassLabel> predict_from_graph(
    const NeighborGraph& graph, const std::vector<ClassLabel>& training_labels,
    int k) {
  require(k >= 1 && k <= graph.k_max, "predict_from_graph: k exceeds graph depth");
  std::vector<ClassLabel> predictions;
  predictions.reserve(graph.rows.size());
  for (const auto& row : graph.rows) {
    std::vector<ClassLabel> votes;
    votes.reserve(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) votes.push_back(training_labels[row[j].index]);
    predictions.push_back(majority_vote(votes));
  }
  return predictions;
}

inline std::vector<int> default_k_grid() {
  std::vector<int> grid(30);
  for (int i = 0; i < 30; ++i) grid[i] = i + 1;
  return grid;
}

// Exhaustive search over k. Validation data comes either from an explicit
// set or from a seed-deterministic holdout of the training set.
struct GridSearchSpec {
  std::vector<int> k_values = default_k_grid();
  double holdout_fraction = 0.25;
  std::uint64_t holdout_seed = 17;
  std::optional<Dataset> validation;
};

struct GridSearchResult {
  std::vector<std::pair<int, double>> curve;  // (k, accuracy), evaluated ks
  std::vector<int> skipped;                   // ks exceeding the training size
  int best_k = 0;
  double best_accuracy = 0.0;
};

inline GridSearchResult grid_search_k(const Dataset& train,
                                      const GridSearchSpec& spec) {
  require(!spec.k_values.empty(), "grid_search_k: empty grid");
  for (int k : spec.k_values) require(k >= 1, "grid_search_k: k must be >= 1");

  Dataset fit_part;
  Dataset validation;
  if (spec.validation.has_value()) {
    fit_part = train;
    validation = *spec.validation;
  } else {
    require(spec.holdout_fraction > 0.0 && spec.holdout_fraction < 1.0,
            "grid_search_k: holdout_fraction must lie in (0, 1)");
    std::tie(fit_part, validation) =
        split(train, {1.0 - spec.holdout_fraction, spec.holdout_seed});
  }
  require(fit_part.size() > 0 && validation.size() > 0,
          "grid_search_k: validation partition is trivial");

  const std::size_t n_fit = fit_part.size();
  int k_feasible = 0;
  for (int k : spec.k_values) {
    if (static_cast<std::size_t>(k) <= n_fit) k_feasible = std::max(k_feasible, k);
  }
  require(k_feasible >= 1, "grid_search_k: no feasible k in the grid");

  const KnnModel model = fit(fit_part, 1);
  const NeighborGraph graph =
      build_neighbor_graph(model, validation.features, k_feasible);

  GridSearchResult result;
  bool have_best = false;
  for (int k : spec.k_values) {
    if (static_cast<std::size_t>(k) > n_fit) {
      result.skipped.push_back(k);
      continue;
    }
    const std::vector<ClassLabel> predictions =
        predict_from_graph(graph, fit_part.labels, k);
    const double score = accuracy(predictions, validation.labels);
    result.curve.emplace_back(k, score);
    if (!have_best || score > result.best_accuracy ||
        (score == result.best_accuracy && k < result.best_k)) {
      have_best = true;
      result.best_k = k;
      result.best_accuracy = score;
    }
  }
  return result;
}

inline void write_grid_curve_csv(const GridSearchResult& result,
                                 const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << "k,accuracy\n";
  char buffer[48];
  for (const auto& [k, score] : result.curve) {
    std::snprintf(buffer, sizeof buffer, "%.12g", score);
    out << k << ',' << buffer << '\n';
  }
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace galaxyml

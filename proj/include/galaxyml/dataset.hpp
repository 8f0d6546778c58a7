#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "galaxyml/errors.hpp"
#include "galaxyml/matrix.hpp"
#include "galaxyml/rng.hpp"

namespace galaxyml {

// Morphology classes in the encoding used throughout: 0 Spiral,
// 1 Elliptical, 2 Uncertain. Compat ingestion may add a fourth class for
// rows with no flag set.
using ClassLabel = int;

inline constexpr ClassLabel kSpiral = 0;
inline constexpr ClassLabel kElliptical = 1;
inline constexpr ClassLabel kUncertain = 2;
inline constexpr int kNumClasses = 3;

// One parsed input row: identifier, the numeric feature columns in schema
// order, and the three morphology flags (spiral, elliptical, uncertain).
struct RawRecord {
  long long object_id = 0;
  Vector features;
  std::array<bool, 3> flags{};
};

// Immutable-by-convention feature table with derived class labels.
struct Dataset {
  Matrix features;                         // n x d
  std::vector<ClassLabel> labels;          // length n
  std::vector<std::string> feature_names;  // length d

  std::size_t size() const { return features.size(); }
  std::size_t dim() const { return col_count(features); }
};

struct StandardizationStats {
  Vector mean;
  Vector stddev;  // constant columns recorded as 1
};

struct SplitSpec {
  double train_fraction = 0.7;
  std::uint64_t seed = 17;
};

// Exactly one flag set maps to its class. Several flags set is ambiguous
// and maps to Uncertain. No flag set maps to missing_label (Uncertain by
// default; 3 under the fill-missing-label compat mode).
inline ClassLabel derive_label(const std::array<bool, 3>& flags,
                               ClassLabel missing_label = kUncertain) {
  const int set = int(flags[0]) + int(flags[1]) + int(flags[2]);
  if (set > 1) return kUncertain;
  if (set == 0) return missing_label;
  if (flags[0]) return kSpiral;
  if (flags[1]) return kElliptical;
  return kUncertain;
}

inline ClassLabel derive_label(const RawRecord& record,
                               ClassLabel missing_label = kUncertain) {
  return derive_label(record.flags, missing_label);
}

// Column-wise (x - mean) / stddev with population moments computed on this
// dataset. Constant columns keep stddev 1 so they map to zero rather than
// dividing by zero.
inline std::pair<Dataset, StandardizationStats> standardize(
    const Dataset& dataset) {
  const std::size_t n = dataset.size();
  require(n > 0, "standardize: dataset is empty");
  const std::size_t d = dataset.dim();

  StandardizationStats stats;
  stats.mean.assign(d, 0.0);
  stats.stddev.assign(d, 0.0);
  for (const Vector& row : dataset.features) {
    for (std::size_t j = 0; j < d; ++j) stats.mean[j] += row[j];
  }
  for (std::size_t j = 0; j < d; ++j) stats.mean[j] /= double(n);
  for (const Vector& row : dataset.features) {
    for (std::size_t j = 0; j < d; ++j) {
      const double diff = row[j] - stats.mean[j];
      stats.stddev[j] += diff * diff;
    }
  }
  for (std::size_t j = 0; j < d; ++j) {
    stats.stddev[j] = std::sqrt(stats.stddev[j] / double(n));
    if (stats.stddev[j] == 0.0) stats.stddev[j] = 1.0;
  }

  Dataset out = dataset;
  for (Vector& row : out.features) {
    for (std::size_t j = 0; j < d; ++j) {
      row[j] = (row[j] - stats.mean[j]) / stats.stddev[j];
    }
  }
  return {std::move(out), std::move(stats)};
}

// Transform with previously fitted stats; no re-fit.
inline Dataset apply_standardization(const Dataset& dataset,
                                     const StandardizationStats& stats) {
  const std::size_t d = dataset.dim();
  require(stats.mean.size() == d && stats.stddev.size() == d,
          "apply_standardization: stats dimension does not match dataset");
  Dataset out = dataset;
  for (Vector& row : out.features) {
    for (std::size_t j = 0; j < d; ++j) {
      row[j] = (row[j] - stats.mean[j]) / stats.stddev[j];
    }
  }
  return out;
}

// Seed-deterministic shuffle then partition; |train| = round(n * fraction).
inline std::pair<Dataset, Dataset> split(const Dataset& dataset,
                                         const SplitSpec& spec) {
  require(spec.train_fraction > 0.0 && spec.train_fraction < 1.0,
          "split: train_fraction must lie in (0, 1)");
  const std::size_t n = dataset.size();
  require(n >= 2, "split: need at least 2 rows");

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(spec.seed);
  rng.shuffle(order);

  const auto n_train = static_cast<std::size_t>(
      std::llround(double(n) * spec.train_fraction));

  Dataset train;
  Dataset test;
  train.feature_names = dataset.feature_names;
  test.feature_names = dataset.feature_names;
  for (std::size_t i = 0; i < n; ++i) {
    Dataset& part = i < n_train ? train : test;
    part.features.push_back(dataset.features[order[i]]);
    part.labels.push_back(dataset.labels[order[i]]);
  }
  return {std::move(train), std::move(test)};
}

// Gaussian blobs, one per class, class counts balanced to within one
// (sample i belongs to class i mod 3).
inline Dataset generate_synthetic(std::size_t n, const Matrix& class_centers,
                                  double spread, std::uint64_t seed) {
  require(n >= 3, "generate_synthetic: need n >= 3");
  require(spread > 0.0, "generate_synthetic: spread must be positive");
  require(class_centers.size() == 3,
          "generate_synthetic: expected one center per class");
  const std::size_t d = col_count(class_centers);
  require(d > 0, "generate_synthetic: centers must be non-empty");

  Rng rng(seed);
  Dataset out;
  out.feature_names.reserve(d);
  for (std::size_t j = 0; j < d; ++j) {
    out.feature_names.push_back("f" + std::to_string(j));
  }
  out.features.reserve(n);
  out.labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = i % 3;
    Vector row(d);
    for (std::size_t j = 0; j < d; ++j) {
      row[j] = class_centers[c][j] + spread * rng.gaussian();
    }
    out.features.push_back(std::move(row));
    out.labels.push_back(static_cast<ClassLabel>(c));
  }
  return out;
}

// Three well separated blob centers over the default 10-dim feature space:
// class c owns dimensions {j : j mod 3 == c}. Pairwise center distance is
// at least sqrt(6).
inline Matrix default_synthetic_centers(std::size_t dim = 10) {
  Matrix centers(3, Vector(dim, 0.0));
  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t j = c; j < dim; j += 3) centers[c][j] = 1.0;
  }
  return centers;
}

// Per-class label counts; the result covers at least num_classes entries
// and grows to fit any larger label present.
inline std::vector<std::size_t> class_distribution(const Dataset& dataset,
                                                   int num_classes = kNumClasses) {
  require(num_classes >= 1, "class_distribution: need at least one class");
  std::vector<std::size_t> counts(static_cast<std::size_t>(num_classes), 0);
  for (ClassLabel label : dataset.labels) {
    require(label >= 0, "class_distribution: negative label");
    if (static_cast<std::size_t>(label) >= counts.size()) {
      counts.resize(static_cast<std::size_t>(label) + 1, 0);
    }
    ++counts[static_cast<std::size_t>(label)];
  }
  return counts;
}

}  // namespace galaxyml

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "galaxyml/dataset.hpp"
#include "galaxyml/errors.hpp"
#include "galaxyml/eval.hpp"
#include "galaxyml/matrix.hpp"
#include "galaxyml/rng.hpp"

namespace galaxyml {

enum class Activation { kRelu, kSigmoid, kTanh, kIdentity };
enum class OptimizerKind { kAdam, kSgd };
enum class SelectionMetric { kAccuracy, kMseOneHot };

// Dense feedforward net: hidden layers share one activation, the output
// layer is always softmax over the class logits.
struct MlpArchitecture {
  int input_dim = 10;
  std::vector<int> hidden_dims = {64, 64};
  int output_dim = kNumClasses;
  Activation hidden_activation = Activation::kRelu;
};

struct DenseLayer {
  Matrix weights;  // out x in
  Vector biases;   // out
};

struct MlpParams {
  std::vector<DenseLayer> layers;
};

// Same shapes as the parameters they correspond to.
using MlpGradients = std::vector<DenseLayer>;

struct TrainConfig {
  OptimizerKind optimizer = OptimizerKind::kAdam;
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double lambda = 0.0;  // L2 strength over the weight matrices
  int epochs = 50;
  int batch_size = 32;
  std::uint64_t seed = 17;
};

struct TrainHistory {
  std::vector<double> loss;  // objective J on the full training set, per epoch
  std::vector<double> accuracy;
  std::vector<double> val_loss;  // filled when a validation set is supplied
  std::vector<double> val_accuracy;
};

struct MlpModel {
  MlpArchitecture architecture;
  MlpParams params;
  OptimizerKind optimizer = OptimizerKind::kAdam;
  std::uint64_t seed = 17;
};

inline Matrix one_hot(const std::vector<ClassLabel>& labels, int num_classes) {
  require(num_classes >= 1, "one_hot: need at least one class");
  Matrix out(labels.size(),
             Vector(static_cast<std::size_t>(num_classes), 0.0));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    require(labels[i] >= 0 && labels[i] < num_classes,
            "one_hot: label out of range");
    out[i][static_cast<std::size_t>(labels[i])] = 1.0;
  }
  return out;
}

// Max-shifted softmax. The shifted logits are clamped at -708 (the
// smallest argument exp() maps to a normal double), so outputs stay
// strictly positive even for extreme inputs.
inline Vector softmax(const Vector& logits) {
  require(!logits.empty(), "softmax: empty logits");
  const double peak = *std::max_element(logits.begin(), logits.end());
  Vector out(logits.size());
  double denom = 0.0;
  for (std::size_t j = 0; j < logits.size(); ++j) {
    out[j] = std::exp(std::max(logits[j] - peak, -708.0));
    denom += out[j];
  }
  for (double& value : out) value /= denom;
  return out;
}

inline Matrix softmax_rows(const Matrix& logits) {
  Matrix out;
  out.reserve(logits.size());
  for (const Vector& row : logits) out.push_back(softmax(row));
  return out;
}

inline constexpr double kLogFloor = 1e-12;

// Mean over the batch of -sum_j y_j ln(max(p_j, 1e-12)).
inline double cross_entropy_loss(const Matrix& probabilities,
                                 const Matrix& targets) {
  require(!probabilities.empty(), "cross_entropy_loss: empty batch");
  require(probabilities.size() == targets.size() &&
              col_count(probabilities) == col_count(targets),
          "cross_entropy_loss: shape mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    for (std::size_t j = 0; j < probabilities[i].size(); ++j) {
      total -= targets[i][j] * std::log(std::max(probabilities[i][j], kLogFloor));
    }
  }
  return total / double(probabilities.size());
}

// lambda/2 times the sum of squared weight entries; biases are excluded.
inline double l2_penalty(const MlpParams& params, double lambda) {
  require(lambda >= 0.0, "l2_penalty: lambda must be >= 0");
  double sum_sq = 0.0;
  for (const DenseLayer& layer : params.layers) {
    for (const Vector& row : layer.weights) {
      for (double w : row) sum_sq += w * w;
    }
  }
  return 0.5 * lambda * sum_sq;
}

inline double objective(double data_loss, double penalty) {
  return data_loss + penalty;
}

namespace detail {

inline double activate(double z, Activation activation) {
  switch (activation) {
    case Activation::kRelu:
      return z > 0.0 ? z : 0.0;
    case Activation::kSigmoid:
      return 1.0 / (1.0 + std::exp(-z));
    case Activation::kTanh:
      return std::tanh(z);
    case Activation::kIdentity:
      return z;
  }
  return z;
}

// Derivative in terms of the pre-activation z and the activated value h.
inline double activate_derivative(double z, double h, Activation activation) {
  switch (activation) {
    case Activation::kRelu:
      return z > 0.0 ? 1.0 : 0.0;
    case Activation::kSigmoid:
      return h * (1.0 - h);
    case Activation::kTanh:
      return 1.0 - h * h;
    case Activation::kIdentity:
      return 1.0;
  }
  return 1.0;
}

inline Matrix affine(const Matrix& input, const DenseLayer& layer) {
  const std::size_t out_dim = layer.weights.size();
  Matrix out(input.size(), Vector(out_dim, 0.0));
  for (std::size_t r = 0; r < input.size(); ++r) {
    const Vector& x = input[r];
    for (std::size_t o = 0; o < out_dim; ++o) {
      const Vector& w = layer.weights[o];
      double total = layer.biases[o];
      for (std::size_t i = 0; i < w.size(); ++i) total += w[i] * x[i];
      out[r][o] = total;
    }
  }
  return out;
}

}  // namespace detail

// Per-layer intermediates kept for backpropagation: inputs[i] is the batch
// fed into layer i (inputs[0] is x itself) and pre_activations[i] is that
// layer's affine output z; the last z row block is the logits.
struct ForwardCache {
  std::vector<Matrix> inputs;
  std::vector<Matrix> pre_activations;

  const Matrix& logits() const { return pre_activations.back(); }
};

inline ForwardCache forward(const MlpParams& params, const Matrix& x,
                            Activation hidden_activation) {
  require(!params.layers.empty(), "forward: no layers");
  if (!x.empty()) {
    require(col_count(x) == params.layers.front().weights.front().size(),
            "forward: input width does not match first layer");
  }

  ForwardCache cache;
  cache.inputs.push_back(x);
  for (std::size_t li = 0; li < params.layers.size(); ++li) {
    Matrix z = detail::affine(cache.inputs.back(), params.layers[li]);
    cache.pre_activations.push_back(z);
    if (li + 1 < params.layers.size()) {
      for (Vector& row : z) {
        for (double& value : row) value = detail::activate(value, hidden_activation);
      }
      cache.inputs.push_back(std::move(z));
    }
  }

  for (const Vector& row : cache.logits()) {
    for (double value : row) {
      if (!std::isfinite(value)) {
        throw NumericError("forward: non-finite logits");
      }
    }
  }
  return cache;
}

// Analytic gradient of J = cross_entropy(softmax(logits), targets) +
// l2_penalty(params, lambda). Softmax and cross-entropy are differentiated
// as one composite, so the gradient at the logits is
// (probabilities - targets) / batch_size.
inline MlpGradients backward(const MlpParams& params, const ForwardCache& cache,
                             const Matrix& targets, double lambda,
                             Activation hidden_activation) {
  const std::size_t num_layers = params.layers.size();
  require(cache.pre_activations.size() == num_layers &&
              cache.inputs.size() == num_layers,
          "backward: cache does not match parameters");
  const std::size_t n = targets.size();
  require(n > 0 && n == cache.logits().size() &&
              col_count(targets) == col_count(cache.logits()),
          "backward: target shape does not match logits");

  Matrix delta = softmax_rows(cache.logits());
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t j = 0; j < delta[r].size(); ++j) {
      delta[r][j] = (delta[r][j] - targets[r][j]) / double(n);
    }
  }

  MlpGradients grads(num_layers);
  for (std::size_t li = num_layers; li-- > 0;) {
    const DenseLayer& layer = params.layers[li];
    const Matrix& layer_input = cache.inputs[li];
    const std::size_t out_dim = layer.weights.size();
    const std::size_t in_dim = layer.weights.front().size();

    DenseLayer& grad = grads[li];
    grad.weights.assign(out_dim, Vector(in_dim, 0.0));
    grad.biases.assign(out_dim, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
      const Vector& x = layer_input[r];
      const Vector& dz = delta[r];
      for (std::size_t o = 0; o < out_dim; ++o) {
        Vector& dw = grad.weights[o];
        const double scale = dz[o];
        for (std::size_t i = 0; i < in_dim; ++i) dw[i] += scale * x[i];
        grad.biases[o] += scale;
      }
    }
    if (lambda != 0.0) {
      for (std::size_t o = 0; o < out_dim; ++o) {
        for (std::size_t i = 0; i < in_dim; ++i) {
          grad.weights[o][i] += lambda * layer.weights[o][i];
        }
      }
    }

    if (li == 0) break;

    // Propagate through the previous hidden activation.
    const Matrix& z_prev = cache.pre_activations[li - 1];
    const Matrix& h_prev = cache.inputs[li];
    Matrix next_delta(n, Vector(in_dim, 0.0));
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t o = 0; o < out_dim; ++o) {
        const double scale = delta[r][o];
        const Vector& w = layer.weights[o];
        for (std::size_t i = 0; i < in_dim; ++i) {
          next_delta[r][i] += scale * w[i];
        }
      }
      for (std::size_t i = 0; i < in_dim; ++i) {
        next_delta[r][i] *= detail::activate_derivative(
            z_prev[r][i], h_prev[r][i], hidden_activation);
      }
    }
    delta = std::move(next_delta);
  }
  return grads;
}

// Adam moment accumulators; unused (and left empty) for plain SGD.
struct OptimizerState {
  MlpGradients first_moment;
  MlpGradients second_moment;
  long step_count = 0;
};

namespace detail {

inline MlpGradients zeros_like(const MlpParams& params) {
  MlpGradients out(params.layers.size());
  for (std::size_t li = 0; li < params.layers.size(); ++li) {
    out[li].weights.assign(params.layers[li].weights.size(),
                           Vector(params.layers[li].weights.front().size(), 0.0));
    out[li].biases.assign(params.layers[li].biases.size(), 0.0);
  }
  return out;
}

}  // namespace detail

// SGD: w <- w - lr * g. Adam: bias-corrected moment estimates, then
// w <- w - lr * mhat / (sqrt(vhat) + eps).
inline void optimizer_step(MlpParams& params, const MlpGradients& grads,
                           OptimizerState& state, const TrainConfig& config) {
  require(grads.size() == params.layers.size(),
          "optimizer_step: gradient/parameter layer count mismatch");

  if (config.optimizer == OptimizerKind::kSgd) {
    for (std::size_t li = 0; li < params.layers.size(); ++li) {
      DenseLayer& layer = params.layers[li];
      const DenseLayer& grad = grads[li];
      for (std::size_t o = 0; o < layer.weights.size(); ++o) {
        for (std::size_t i = 0; i < layer.weights[o].size(); ++i) {
          layer.weights[o][i] -= config.learning_rate * grad.weights[o][i];
        }
        layer.biases[o] -= config.learning_rate * grad.biases[o];
      }
    }
    return;
  }

  if (state.first_moment.empty()) {
    state.first_moment = detail::zeros_like(params);
    state.second_moment = detail::zeros_like(params);
    state.step_count = 0;
  }
  ++state.step_count;
  const double bias1 = 1.0 - std::pow(config.beta1, double(state.step_count));
  const double bias2 = 1.0 - std::pow(config.beta2, double(state.step_count));

  const auto adam_update = [&](double& w, double g, double& m, double& v) {
    m = config.beta1 * m + (1.0 - config.beta1) * g;
    v = config.beta2 * v + (1.0 - config.beta2) * g * g;
    const double mhat = m / bias1;
    const double vhat = v / bias2;
    w -= config.learning_rate * mhat / (std::sqrt(vhat) + config.epsilon);
  };

  for (std::size_t li = 0; li < params.layers.size(); ++li) {
    DenseLayer& layer = params.layers[li];
    const DenseLayer& grad = grads[li];
    DenseLayer& m = state.first_moment[li];
    DenseLayer& v = state.second_moment[li];
    for (std::size_t o = 0; o < layer.weights.size(); ++o) {
      for (std::size_t i = 0; i < layer.weights[o].size(); ++i) {
        adam_update(layer.weights[o][i], grad.weights[o][i], m.weights[o][i],
                    v.weights[o][i]);
      }
      adam_update(layer.biases[o], grad.biases[o], m.biases[o], v.biases[o]);
    }
  }
}

// Symmetric scaled-uniform init, U(-limit, limit) with
// limit = sqrt(6 / (fan_in + fan_out)) per layer; biases start at zero.
// Weights are drawn row-major, layer by layer.
inline MlpParams init_params(const MlpArchitecture& architecture, Rng& rng) {
  require(architecture.input_dim >= 1 && architecture.output_dim >= 1,
          "init_params: dims must be >= 1");
  for (int h : architecture.hidden_dims) {
    require(h >= 1, "init_params: hidden dims must be >= 1");
  }

  std::vector<int> sizes;
  sizes.push_back(architecture.input_dim);
  for (int h : architecture.hidden_dims) sizes.push_back(h);
  sizes.push_back(architecture.output_dim);

  MlpParams params;
  params.layers.resize(sizes.size() - 1);
  for (std::size_t li = 0; li + 1 < sizes.size(); ++li) {
    const auto fan_in = static_cast<std::size_t>(sizes[li]);
    const auto fan_out = static_cast<std::size_t>(sizes[li + 1]);
    const double limit = std::sqrt(6.0 / double(fan_in + fan_out));
    DenseLayer& layer = params.layers[li];
    layer.weights.assign(fan_out, Vector(fan_in, 0.0));
    layer.biases.assign(fan_out, 0.0);
    for (Vector& row : layer.weights) {
      for (double& w : row) w = rng.uniform_real(-limit, limit);
    }
  }
  return params;
}

// Mini-batch training loop. Batch order reshuffles every epoch from the
// config seed; the per-epoch history reports the objective J and accuracy
// over the full training set. Aborts with a diagnostic naming the epoch
// (and batch) if the loss or logits go non-finite.
inline std::pair<MlpModel, TrainHistory> train(const Dataset& training,
                                               const MlpArchitecture& architecture,
                                               const TrainConfig& config,
                                               const Dataset* validation = nullptr) {
  const std::size_t n = training.size();
  require(n > 0, "train: empty training set");
  require(training.dim() == static_cast<std::size_t>(architecture.input_dim),
          "train: dataset dimension does not match architecture");
  require(config.learning_rate >= 0.0, "train: negative learning rate");
  require(config.epochs >= 1, "train: epochs must be >= 1");
  require(config.batch_size >= 1, "train: batch_size must be >= 1");

  Rng rng(config.seed);
  MlpParams params = init_params(architecture, rng);
  const Matrix targets = one_hot(training.labels, architecture.output_dim);
  Matrix val_targets;
  if (validation != nullptr) {
    val_targets = one_hot(validation->labels, architecture.output_dim);
  }

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;

  const auto batch_size = static_cast<std::size_t>(config.batch_size);
  OptimizerState state;
  TrainHistory history;

  const auto evaluate = [&](const Matrix& features, const Matrix& expected,
                            const std::vector<ClassLabel>& labels, double& loss,
                            double& score) {
    const ForwardCache cache =
        forward(params, features, architecture.hidden_activation);
    const Matrix probabilities = softmax_rows(cache.logits());
    loss = objective(cross_entropy_loss(probabilities, expected),
                     l2_penalty(params, config.lambda));
    std::vector<ClassLabel> predicted;
    predicted.reserve(probabilities.size());
    for (const Vector& row : probabilities) {
      predicted.push_back(static_cast<ClassLabel>(
          std::max_element(row.begin(), row.end()) - row.begin()));
    }
    score = accuracy(predicted, labels);
  };

  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    rng.shuffle(order);
    std::size_t batch_index = 0;
    for (std::size_t start = 0; start < n; start += batch_size, ++batch_index) {
      const std::size_t end = std::min(start + batch_size, n);
      Matrix x_batch;
      Matrix y_batch;
      x_batch.reserve(end - start);
      y_batch.reserve(end - start);
      for (std::size_t i = start; i < end; ++i) {
        x_batch.push_back(training.features[order[i]]);
        y_batch.push_back(targets[order[i]]);
      }
      try {
        const ForwardCache cache =
            forward(params, x_batch, architecture.hidden_activation);
        const MlpGradients grads = backward(params, cache, y_batch,
                                            config.lambda,
                                            architecture.hidden_activation);
        optimizer_step(params, grads, state, config);
      } catch (const NumericError&) {
        throw NumericError("training aborted: non-finite values at epoch " +
                           std::to_string(epoch) + ", batch " +
                           std::to_string(batch_index));
      }
    }

    double loss = 0.0;
    double score = 0.0;
    try {
      evaluate(training.features, targets, training.labels, loss, score);
    } catch (const NumericError&) {
      throw NumericError("training aborted: non-finite loss at epoch " +
                         std::to_string(epoch));
    }
    if (!std::isfinite(loss)) {
      throw NumericError("training aborted: non-finite loss at epoch " +
                         std::to_string(epoch));
    }
    history.loss.push_back(loss);
    history.accuracy.push_back(score);

    if (validation != nullptr) {
      double val_loss = 0.0;
      double val_score = 0.0;
      evaluate(validation->features, val_targets, validation->labels, val_loss,
               val_score);
      history.val_loss.push_back(val_loss);
      history.val_accuracy.push_back(val_score);
    }
  }

  return {MlpModel{architecture, std::move(params), config.optimizer,
                   config.seed},
          history};
}

// Argmax of softmax(logits) per row; ties resolve to the smallest class.
inline std::vector<ClassLabel> predict(const MlpModel& model,
                                       const Matrix& queries) {
  if (queries.empty()) return {};
  require(col_count(queries) ==
              static_cast<std::size_t>(model.architecture.input_dim),
          "predict: query dimension does not match architecture");
  const ForwardCache cache =
      forward(model.params, queries, model.architecture.hidden_activation);
  std::vector<ClassLabel> predictions;
  predictions.reserve(queries.size());
  for (const Vector& row : cache.logits()) {
    const Vector probabilities = softmax(row);
    predictions.push_back(static_cast<ClassLabel>(
        std::max_element(probabilities.begin(), probabilities.end()) -
        probabilities.begin()));
  }
  return predictions;
}

// Mean over samples and classes of (p - y)^2, the compat selection metric
// for search (lower is better).
inline double mse_one_hot(const Matrix& probabilities, const Matrix& targets) {
  require(!probabilities.empty(), "mse_one_hot: empty batch");
  require(probabilities.size() == targets.size() &&
              col_count(probabilities) == col_count(targets),
          "mse_one_hot: shape mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    for (std::size_t j = 0; j < probabilities[i].size(); ++j) {
      const double diff = probabilities[i][j] - targets[i][j];
      total += diff * diff;
    }
  }
  return total / double(probabilities.size() * col_count(probabilities));
}

struct MlpCandidate {
  std::vector<int> hidden_dims;
  Activation activation = Activation::kRelu;
  OptimizerKind optimizer = OptimizerKind::kAdam;
};

struct CandidateScore {
  MlpCandidate candidate;
  std::vector<double> fold_scores;
  double mean_score = 0.0;
};

struct RandomSearchSpec {
  int draws = 10;
  int folds = 3;
  std::vector<std::vector<int>> hidden_dims_choices = {{32, 32}, {64, 64},
                                                       {128, 128}};
  std::vector<Activation> activation_choices = {
      Activation::kRelu, Activation::kSigmoid, Activation::kTanh};
  std::vector<OptimizerKind> optimizer_choices = {OptimizerKind::kAdam,
                                                  OptimizerKind::kSgd};
  SelectionMetric selection_metric = SelectionMetric::kAccuracy;
  TrainConfig base;  // learning rate, epochs, batch size for every candidate
  int num_classes = kNumClasses;
  std::uint64_t seed = 17;
};

struct RandomSearchResult {
  std::vector<CandidateScore> candidates;
  int best_index = 0;
  SelectionMetric selection_metric = SelectionMetric::kAccuracy;
  std::vector<std::string> warnings;

  const CandidateScore& best() const {
    return candidates[static_cast<std::size_t>(best_index)];
  }
};

// Uniform draws from the (hidden dims x activation x optimizer) space,
// deduplicated, each scored by k-fold cross-validation. Fold training
// seeds derive from (seed, candidate index, fold index) so results do not
// depend on evaluation order.
inline RandomSearchResult randomized_search(const Dataset& training,
                                            const RandomSearchSpec& spec) {
  require(spec.draws >= 1, "randomized_search: draws must be >= 1");
  require(spec.folds >= 2, "randomized_search: folds must be >= 2");
  require(!spec.hidden_dims_choices.empty() &&
              !spec.activation_choices.empty() &&
              !spec.optimizer_choices.empty(),
          "randomized_search: empty search space");
  const std::size_t n = training.size();
  require(n >= static_cast<std::size_t>(spec.folds),
          "randomized_search: fewer rows than folds");

  const std::size_t space_size = spec.hidden_dims_choices.size() *
                                 spec.activation_choices.size() *
                                 spec.optimizer_choices.size();
  const auto candidate_at = [&](std::size_t flat) {
    MlpCandidate candidate;
    candidate.hidden_dims =
        spec.hidden_dims_choices[flat % spec.hidden_dims_choices.size()];
    flat /= spec.hidden_dims_choices.size();
    candidate.activation =
        spec.activation_choices[flat % spec.activation_choices.size()];
    flat /= spec.activation_choices.size();
    candidate.optimizer = spec.optimizer_choices[flat];
    return candidate;
  };

  RandomSearchResult result;
  result.selection_metric = spec.selection_metric;

  std::vector<std::size_t> chosen;
  if (static_cast<std::size_t>(spec.draws) >= space_size) {
    for (std::size_t i = 0; i < space_size; ++i) chosen.push_back(i);
    if (static_cast<std::size_t>(spec.draws) > space_size) {
      result.warnings.push_back(
          "draws (" + std::to_string(spec.draws) + ") exceed the " +
          std::to_string(space_size) +
          "-configuration space; evaluating each configuration once");
    }
  } else {
    Rng sampler(derive_seed(spec.seed, 1));
    std::vector<bool> seen(space_size, false);
    for (int d = 0; d < spec.draws; ++d) {
      const std::size_t flat = sampler.uniform_index(space_size);
      if (!seen[flat]) {
        seen[flat] = true;
        chosen.push_back(flat);
      }
    }
  }

  // Fold assignment: one seed-deterministic permutation, chunked.
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng fold_rng(derive_seed(spec.seed, 2));
  fold_rng.shuffle(order);
  const auto folds = static_cast<std::size_t>(spec.folds);
  const auto fold_begin = [&](std::size_t f) { return f * n / folds; };

  for (std::size_t c = 0; c < chosen.size(); ++c) {
    CandidateScore entry;
    entry.candidate = candidate_at(chosen[c]);

    for (std::size_t f = 0; f < folds; ++f) {
      Dataset fit_part;
      Dataset val_part;
      fit_part.feature_names = training.feature_names;
      val_part.feature_names = training.feature_names;
      const std::size_t begin = fold_begin(f);
      const std::size_t end = fold_begin(f + 1);
      for (std::size_t i = 0; i < n; ++i) {
        Dataset& part = (i >= begin && i < end) ? val_part : fit_part;
        part.features.push_back(training.features[order[i]]);
        part.labels.push_back(training.labels[order[i]]);
      }

      MlpArchitecture architecture;
      architecture.input_dim = static_cast<int>(training.dim());
      architecture.hidden_dims = entry.candidate.hidden_dims;
      architecture.output_dim = spec.num_classes;
      architecture.hidden_activation = entry.candidate.activation;

      TrainConfig config = spec.base;
      config.optimizer = entry.candidate.optimizer;
      config.seed = derive_seed(spec.seed, 3 + c, f);

      const auto [model, history] = train(fit_part, architecture, config);
      double score = 0.0;
      if (spec.selection_metric == SelectionMetric::kAccuracy) {
        score = accuracy(predict(model, val_part.features), val_part.labels);
      } else {
        const ForwardCache cache = forward(model.params, val_part.features,
                                           architecture.hidden_activation);
        score = mse_one_hot(softmax_rows(cache.logits()),
                            one_hot(val_part.labels, spec.num_classes));
      }
      entry.fold_scores.push_back(score);
    }

    double total = 0.0;
    for (double score : entry.fold_scores) total += score;
    entry.mean_score = total / double(entry.fold_scores.size());
    result.candidates.push_back(std::move(entry));
  }

  const bool maximize = spec.selection_metric == SelectionMetric::kAccuracy;
  result.best_index = 0;
  for (std::size_t c = 1; c < result.candidates.size(); ++c) {
    const double score = result.candidates[c].mean_score;
    const double best = result.candidates[static_cast<std::size_t>(
        result.best_index)].mean_score;
    if (maximize ? score > best : score < best) {
      result.best_index = static_cast<int>(c);
    }
  }
  return result;
}

// epoch,loss,accuracy rows, with validation columns when present.
inline void write_history_csv(const TrainHistory& history,
                              const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  const bool with_validation = !history.val_loss.empty();
  out << (with_validation ? "epoch,loss,accuracy,val_loss,val_accuracy"
                          : "epoch,loss,accuracy")
      << '\n';
  char buffer[48];
  const auto emit = [&](double value) {
    std::snprintf(buffer, sizeof buffer, "%.12g", value);
    out << ',' << buffer;
  };
  for (std::size_t e = 0; e < history.loss.size(); ++e) {
    out << (e + 1);
    emit(history.loss[e]);
    emit(history.accuracy[e]);
    if (with_validation) {
      emit(history.val_loss[e]);
      emit(history.val_accuracy[e]);
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace galaxyml

#include "galaxyml/mlp.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "galaxyml/dataset.hpp"
#include "galaxyml/eval.hpp"
#include "galaxyml/rng.hpp"

namespace galaxyml {
namespace {

Matrix random_batch(Rng& rng, std::size_t n, std::size_t d) {
  Matrix batch(n, Vector(d));
  for (auto& row : batch) {
    for (double& v : row) v = rng.uniform_real(-2.0, 2.0);
  }
  return batch;
}

std::vector<ClassLabel> random_labels(Rng& rng, std::size_t n, int q) {
  std::vector<ClassLabel> labels(n);
  for (auto& l : labels) l = static_cast<ClassLabel>(rng.uniform_index(q));
  return labels;
}

// Scalar objective used by the finite-difference oracle.
double objective_at(const MlpParams& params, const Matrix& x,
                    const Matrix& targets, double lambda,
                    Activation activation) {
  const ForwardCache cache = forward(params, x, activation);
  return objective(cross_entropy_loss(softmax_rows(cache.logits()), targets),
                   l2_penalty(params, lambda));
}

TEST(OneHot, PlacesASingleOne) {
  const Matrix encoded = one_hot({1}, 3);
  ASSERT_EQ(encoded.size(), 1u);
  EXPECT_EQ(encoded[0], (Vector{0.0, 1.0, 0.0}));
}

TEST(OneHot, ArgmaxInvertsTheEncoding) {
  Rng rng(1);
  const std::vector<ClassLabel> labels = random_labels(rng, 200, 3);
  const Matrix encoded = one_hot(labels, 3);
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto arg = std::max_element(encoded[i].begin(), encoded[i].end()) -
                     encoded[i].begin();
    EXPECT_EQ(static_cast<ClassLabel>(arg), labels[i]);
  }
}

TEST(OneHot, CompatFourClassRowsAreIdentity) {
  const Matrix encoded = one_hot({0, 1, 2, 3}, 4);
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      EXPECT_DOUBLE_EQ(encoded[i][j], i == j ? 1.0 : 0.0);
    }
  }
}

TEST(OneHot, OutOfRangeLabelRejected) {
  EXPECT_THROW(one_hot({3}, 3), std::invalid_argument);
  EXPECT_THROW(one_hot({-1}, 3), std::invalid_argument);
}

TEST(Softmax, ZeroLogitsAreUniform) {
  const Vector probabilities = softmax({0.0, 0.0, 0.0});
  for (double p : probabilities) EXPECT_NEAR(p, 1.0 / 3.0, 1e-15);
}

TEST(Softmax, ShiftInvariant) {
  Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    Vector logits(5);
    for (double& v : logits) v = rng.uniform_real(-10.0, 10.0);
    const double shift = rng.uniform_real(-50.0, 50.0);
    Vector shifted = logits;
    for (double& v : shifted) v += shift;
    const Vector a = softmax(logits);
    const Vector b = softmax(shifted);
    for (std::size_t j = 0; j < a.size(); ++j) EXPECT_NEAR(a[j], b[j], 1e-12);
  }
}

TEST(Softmax, StableAtExtremeLogits) {
  const Vector probabilities = softmax({1000.0, 0.0, -1000.0});
  for (double p : probabilities) {
    EXPECT_TRUE(std::isfinite(p));
    EXPECT_GT(p, 0.0);
  }
  EXPECT_GT(probabilities[0], 1.0 - 1e-12);
  double sum = 0.0;
  for (double p : probabilities) sum += p;
  EXPECT_NEAR(sum, 1.0, 1e-9);
}

TEST(Softmax, RowsArePositiveAndSumToOne) {
  Rng rng(3);
  for (int trial = 0; trial < 1000; ++trial) {
    Vector logits(4);
    for (double& v : logits) v = rng.uniform_real(-30.0, 30.0);
    const Vector p = softmax(logits);
    double sum = 0.0;
    for (double value : p) {
      EXPECT_GT(value, 0.0);
      sum += value;
    }
    EXPECT_NEAR(sum, 1.0, 1e-9);
  }
}

TEST(CrossEntropy, PerfectPredictionIsZero) {
  const Matrix targets = one_hot({0, 1, 2}, 3);
  EXPECT_NEAR(cross_entropy_loss(targets, targets), 0.0, 1e-12);
}

TEST(CrossEntropy, UniformPredictionIsLogQ) {
  const Matrix probabilities(8, Vector(3, 1.0 / 3.0));
  const Matrix targets = one_hot({0, 1, 2, 0, 1, 2, 0, 1}, 3);
  EXPECT_NEAR(cross_entropy_loss(probabilities, targets), std::log(3.0), 1e-12);
}

TEST(CrossEntropy, MatchesScalarLoopOracle) {
  Rng rng(4);
  Matrix probabilities;
  for (int i = 0; i < 32; ++i) probabilities.push_back(softmax(random_batch(rng, 1, 3)[0]));
  const Matrix targets = one_hot(random_labels(rng, 32, 3), 3);

  double expected = 0.0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      expected -= targets[i][j] * std::log(std::max(probabilities[i][j], 1e-12));
    }
  }
  expected /= double(probabilities.size());
  EXPECT_NEAR(cross_entropy_loss(probabilities, targets), expected, 1e-10);
}

TEST(CrossEntropy, NonNegativeAndShapeChecked) {
  Rng rng(5);
  const Matrix probabilities = {softmax({0.3, -0.2, 1.4})};
  const Matrix targets = one_hot({2}, 3);
  EXPECT_GE(cross_entropy_loss(probabilities, targets), 0.0);
  EXPECT_THROW(cross_entropy_loss(probabilities, one_hot({1}, 4)),
               std::invalid_argument);
}

TEST(L2Penalty, ZeroLambdaGivesZero) {
  Rng rng(6);
  MlpParams params = init_params({4, {3}, 2, Activation::kRelu}, rng);
  EXPECT_DOUBLE_EQ(l2_penalty(params, 0.0), 0.0);
}

TEST(L2Penalty, SingleWeightExample) {
  MlpParams params;
  params.layers.push_back({{{2.0}}, {0.0}});
  EXPECT_DOUBLE_EQ(l2_penalty(params, 1.0), 2.0);  // 1/2 * 2^2
}

TEST(L2Penalty, MatchesScalarLoopAndIgnoresBiases) {
  Rng rng(7);
  MlpParams params = init_params({6, {5, 4}, 3, Activation::kRelu}, rng);
  for (auto& layer : params.layers) {
    for (auto& b : layer.biases) b = rng.uniform_real(-9.0, 9.0);
  }
  const double lambda = 0.37;
  double sum_sq = 0.0;
  for (const auto& layer : params.layers) {
    for (const auto& row : layer.weights) {
      for (double w : row) sum_sq += w * w;
    }
  }
  EXPECT_NEAR(l2_penalty(params, lambda), 0.5 * lambda * sum_sq, 1e-12);
}

TEST(L2Penalty, MonotoneInLambda) {
  Rng rng(8);
  const MlpParams params = init_params({5, {4}, 3, Activation::kRelu}, rng);
  double previous = -1.0;
  for (double lambda : {0.0, 0.05, 0.1, 0.5, 1.0}) {
    const double s = l2_penalty(params, lambda);
    EXPECT_GE(s, previous);
    previous = s;
  }
}

TEST(Objective, IsTheExactSum) {
  EXPECT_DOUBLE_EQ(objective(1.0, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(objective(std::log(3.0), 2.0), std::log(3.0) + 2.0);
}

TEST(Forward, ZeroParamsGiveUniformSoftmax) {
  MlpParams params;
  params.layers.push_back({Matrix(4, Vector(3, 0.0)), Vector(4, 0.0)});
  params.layers.push_back({Matrix(3, Vector(4, 0.0)), Vector(3, 0.0)});
  const ForwardCache cache = forward(params, {{0.4, -1.0, 2.0}}, Activation::kRelu);
  const Vector probabilities = softmax(cache.logits()[0]);
  for (double p : probabilities) EXPECT_NEAR(p, 1.0 / 3.0, 1e-15);
}

TEST(Forward, ReluClampsNegatives) {
  EXPECT_DOUBLE_EQ(detail::activate(-1.0, Activation::kRelu), 0.0);
  EXPECT_DOUBLE_EQ(detail::activate(2.0, Activation::kRelu), 2.0);
}

TEST(Forward, IdentityNetworkIsTheIdentity) {
  MlpParams params;
  Matrix eye(3, Vector(3, 0.0));
  for (int i = 0; i < 3; ++i) eye[i][i] = 1.0;
  params.layers.push_back({eye, Vector(3, 0.0)});
  params.layers.push_back({eye, Vector(3, 0.0)});
  const Matrix x = {{0.25, -1.5, 3.0}, {1.0, 2.0, -4.0}};
  const ForwardCache cache = forward(params, x, Activation::kIdentity);
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      EXPECT_DOUBLE_EQ(cache.logits()[i][j], x[i][j]);
    }
  }
}

TEST(Forward, ShapeMismatchRejected) {
  Rng rng(9);
  const MlpParams params = init_params({4, {3}, 2, Activation::kRelu}, rng);
  EXPECT_THROW(forward(params, {{1.0, 2.0}}, Activation::kRelu),
               std::invalid_argument);
}

TEST(Forward, NonFiniteLogitsRaiseNumericError) {
  MlpParams params;
  const double huge = 1e308;
  params.layers.push_back({{{huge, huge}}, {0.0}});
  params.layers.push_back({{{huge}}, {0.0}});
  EXPECT_THROW(forward(params, {{1e8, 1e8}}, Activation::kRelu), NumericError);
}

TEST(Backward, PerfectPredictionHasVanishingLogitGradient) {
  // Drive one logit strongly positive so softmax saturates at the target.
  MlpParams params;
  params.layers.push_back({{{40.0}, {-40.0}, {-40.0}}, {0.0, 0.0, 0.0}});
  const Matrix x = {{1.0}};
  const Matrix targets = one_hot({0}, 3);
  const ForwardCache cache = forward(params, x, Activation::kRelu);
  const MlpGradients grads = backward(params, cache, targets, 0.0,
                                      Activation::kRelu);
  for (const auto& row : grads[0].weights) {
    for (double g : row) EXPECT_NEAR(g, 0.0, 1e-12);
  }
  for (double g : grads[0].biases) EXPECT_NEAR(g, 0.0, 1e-12);
}

TEST(Backward, RegularizerTermIsolatedWhenDataGradientVanishes) {
  Rng rng(10);
  const MlpParams params = init_params({3, {4}, 2, Activation::kTanh}, rng);
  const Matrix x = random_batch(rng, 6, 3);
  const ForwardCache cache = forward(params, x, Activation::kTanh);
  // Targets equal to the predicted distribution zero out (p - y).
  const Matrix soft_targets = softmax_rows(cache.logits());
  const double lambda = 0.25;
  const MlpGradients grads =
      backward(params, cache, soft_targets, lambda, Activation::kTanh);
  for (std::size_t li = 0; li < params.layers.size(); ++li) {
    for (std::size_t o = 0; o < params.layers[li].weights.size(); ++o) {
      for (std::size_t i = 0; i < params.layers[li].weights[o].size(); ++i) {
        EXPECT_DOUBLE_EQ(grads[li].weights[o][i],
                         lambda * params.layers[li].weights[o][i]);
      }
      EXPECT_DOUBLE_EQ(grads[li].biases[o], 0.0);
    }
  }
}

TEST(Backward, CacheMismatchRejected) {
  Rng rng(11);
  const MlpParams params = init_params({3, {4}, 2, Activation::kRelu}, rng);
  const MlpParams other = init_params({3, {4, 4}, 2, Activation::kRelu}, rng);
  const Matrix x = random_batch(rng, 2, 3);
  const ForwardCache cache = forward(params, x, Activation::kRelu);
  EXPECT_THROW(backward(other, cache, one_hot({0, 1}, 2), 0.0,
                        Activation::kRelu),
               std::invalid_argument);
}

// Central finite differences of J over every parameter entry. Entries with
// |g| < 1e-6 are compared absolutely, the rest relatively at 1e-4.
void expect_gradients_match(const MlpArchitecture& architecture, double lambda,
                            std::uint64_t seed) {
  Rng rng(seed);
  MlpParams params = init_params(architecture, rng);
  for (auto& layer : params.layers) {
    for (auto& b : layer.biases) b = rng.uniform_real(-0.3, 0.3);
  }
  const Matrix x = random_batch(rng, 16, architecture.input_dim);
  const Matrix targets =
      one_hot(random_labels(rng, 16, architecture.output_dim),
              architecture.output_dim);

  const ForwardCache cache = forward(params, x, architecture.hidden_activation);
  const MlpGradients analytic =
      backward(params, cache, targets, lambda, architecture.hidden_activation);

  const double step = 1e-7;
  const auto check_entry = [&](double& value, double gradient) {
    const double saved = value;
    value = saved + step;
    const double plus =
        objective_at(params, x, targets, lambda, architecture.hidden_activation);
    value = saved - step;
    const double minus =
        objective_at(params, x, targets, lambda, architecture.hidden_activation);
    value = saved;
    const double numeric = (plus - minus) / (2.0 * step);
    if (std::abs(gradient) < 1e-6) {
      EXPECT_NEAR(numeric, gradient, 1e-6);
    } else {
      EXPECT_LT(std::abs(numeric - gradient) / std::abs(gradient), 1e-4)
          << "analytic=" << gradient << " numeric=" << numeric;
    }
  };

  for (std::size_t li = 0; li < params.layers.size(); ++li) {
    for (std::size_t o = 0; o < params.layers[li].weights.size(); ++o) {
      for (std::size_t i = 0; i < params.layers[li].weights[o].size(); ++i) {
        check_entry(params.layers[li].weights[o][i],
                    analytic[li].weights[o][i]);
      }
      check_entry(params.layers[li].biases[o], analytic[li].biases[o]);
    }
  }
}

TEST(GradientCheck, AnalyticMatchesCentralDifferences) {
  const MlpArchitecture architecture{10, {8, 8}, 3, Activation::kRelu};
  for (std::uint64_t seed : {100, 101, 102, 103, 104}) {
    for (double lambda : {0.0, 0.1}) {
      expect_gradients_match(architecture, lambda, seed);
    }
  }
}

TEST(GradientCheck, HoldsForOtherActivations) {
  expect_gradients_match({6, {5, 4}, 3, Activation::kSigmoid}, 0.1, 200);
  expect_gradients_match({6, {5, 4}, 3, Activation::kTanh}, 0.0, 201);
}

TEST(OptimizerStep, SgdExample) {
  MlpParams params;
  params.layers.push_back({{{1.0}}, {0.0}});
  MlpGradients grads;
  grads.push_back({{{2.0}}, {0.0}});
  OptimizerState state;
  TrainConfig config;
  config.optimizer = OptimizerKind::kSgd;
  config.learning_rate = 0.1;
  optimizer_step(params, grads, state, config);
  EXPECT_DOUBLE_EQ(params.layers[0].weights[0][0], 0.8);
}

TEST(OptimizerStep, ZeroGradientLeavesParamsUnchanged) {
  for (OptimizerKind kind : {OptimizerKind::kSgd, OptimizerKind::kAdam}) {
    MlpParams params;
    params.layers.push_back({{{1.5, -0.5}}, {0.25}});
    MlpGradients grads;
    grads.push_back({{{0.0, 0.0}}, {0.0}});
    OptimizerState state;
    TrainConfig config;
    config.optimizer = kind;
    optimizer_step(params, grads, state, config);
    EXPECT_DOUBLE_EQ(params.layers[0].weights[0][0], 1.5);
    EXPECT_DOUBLE_EQ(params.layers[0].weights[0][1], -0.5);
    EXPECT_DOUBLE_EQ(params.layers[0].biases[0], 0.25);
  }
}

TEST(OptimizerStep, AdamFirstStepIsSignedLearningRate) {
  MlpParams params;
  params.layers.push_back({{{1.0, 1.0}}, {1.0}});
  MlpGradients grads;
  grads.push_back({{{2.0, -0.03}}, {5.0}});
  OptimizerState state;
  TrainConfig config;  // adam defaults
  optimizer_step(params, grads, state, config);

  const auto expected_update = [&](double g) {
    return config.learning_rate * g / (std::abs(g) + config.epsilon);
  };
  EXPECT_NEAR(params.layers[0].weights[0][0], 1.0 - expected_update(2.0), 1e-15);
  EXPECT_NEAR(params.layers[0].weights[0][1], 1.0 - expected_update(-0.03), 1e-15);
  EXPECT_NEAR(params.layers[0].biases[0], 1.0 - expected_update(5.0), 1e-15);
}

Dataset standardized_blobs(std::size_t n, double spread, std::uint64_t seed) {
  const Dataset raw = generate_synthetic(n, default_synthetic_centers(), spread, seed);
  return standardize(raw).first;
}

TEST(Train, ZeroLearningRateFreezesParameters) {
  const Dataset ds = standardized_blobs(90, 0.3, 30);
  TrainConfig config;
  config.learning_rate = 0.0;
  config.epochs = 5;
  Rng rng(config.seed);
  const MlpArchitecture architecture{10, {8, 8}, 3, Activation::kRelu};
  const MlpParams initial = init_params(architecture, rng);
  const auto [model, history] = train(ds, architecture, config);
  for (std::size_t li = 0; li < initial.layers.size(); ++li) {
    EXPECT_EQ(model.params.layers[li].weights, initial.layers[li].weights);
    EXPECT_EQ(model.params.layers[li].biases, initial.layers[li].biases);
  }
  for (double loss : history.loss) EXPECT_DOUBLE_EQ(loss, history.loss[0]);
}

TEST(Train, SeparableBlobsReachHighAccuracyWithDefaults) {
  const Dataset ds = standardized_blobs(600, 0.25, 31);
  const auto [model, history] = train(ds, MlpArchitecture{}, TrainConfig{});
  (void)model;
  EXPECT_GE(history.accuracy.back(), 0.95);
}

TEST(Train, SameSeedGivesBitIdenticalHistory) {
  const Dataset ds = standardized_blobs(150, 0.3, 32);
  TrainConfig config;
  config.epochs = 8;
  const auto [model_a, history_a] = train(ds, MlpArchitecture{}, config);
  const auto [model_b, history_b] = train(ds, MlpArchitecture{}, config);
  EXPECT_EQ(history_a.loss, history_b.loss);
  EXPECT_EQ(history_a.accuracy, history_b.accuracy);
  for (std::size_t li = 0; li < model_a.params.layers.size(); ++li) {
    EXPECT_EQ(model_a.params.layers[li].weights,
              model_b.params.layers[li].weights);
  }
}

TEST(Train, DivergenceAbortsWithEpochDiagnostic) {
  const Dataset ds = standardized_blobs(90, 0.3, 33);
  TrainConfig config;
  config.optimizer = OptimizerKind::kSgd;
  config.learning_rate = 1e12;
  config.epochs = 50;
  try {
    train(ds, MlpArchitecture{}, config);
    FAIL() << "expected NumericError";
  } catch (const NumericError& e) {
    EXPECT_NE(std::string(e.what()).find("epoch"), std::string::npos);
  }
}

TEST(Train, ValidationSeriesTracksSuppliedSet) {
  const Dataset train_set = standardized_blobs(120, 0.3, 34);
  const Dataset val_set = standardized_blobs(60, 0.3, 35);
  TrainConfig config;
  config.epochs = 4;
  const auto [model, history] = train(train_set, MlpArchitecture{}, config, &val_set);
  (void)model;
  EXPECT_EQ(history.val_loss.size(), history.loss.size());
  EXPECT_EQ(history.val_accuracy.size(), history.accuracy.size());
}

TEST(Train, FullBatchSgdDecreasesObjective) {
  const Dataset ds = standardized_blobs(64, 0.6, 36);
  TrainConfig config;
  config.optimizer = OptimizerKind::kSgd;
  config.learning_rate = 1e-3;
  config.batch_size = 64;
  config.epochs = 200;
  const auto [model, history] = train(ds, MlpArchitecture{}, config);
  (void)model;
  EXPECT_LT(history.loss.back(), history.loss.front());
}

TEST(PredictMlp, ZeroWeightsPredictClassZero) {
  MlpModel model;
  model.architecture = {4, {3}, 3, Activation::kRelu};
  model.params.layers.push_back({Matrix(3, Vector(4, 0.0)), Vector(3, 0.0)});
  model.params.layers.push_back({Matrix(3, Vector(3, 0.0)), Vector(3, 0.0)});
  const auto predictions = predict(model, {{1.0, 2.0, 3.0, 4.0}, {0.0, 0.0, 0.0, 0.0}});
  EXPECT_EQ(predictions, (std::vector<ClassLabel>{0, 0}));
}

TEST(PredictMlp, OutputBiasShiftDoesNotChangePredictions) {
  const Dataset ds = standardized_blobs(150, 0.3, 37);
  TrainConfig config;
  config.epochs = 6;
  auto [model, history] = train(ds, MlpArchitecture{}, config);
  (void)history;
  const auto before = predict(model, ds.features);
  for (double& b : model.params.layers.back().biases) b += 12.75;
  const auto after = predict(model, ds.features);
  EXPECT_EQ(before, after);
}

TEST(PredictMlp, EmptyBatchAndDimensionChecks) {
  const Dataset ds = standardized_blobs(60, 0.3, 38);
  TrainConfig config;
  config.epochs = 2;
  const auto [model, history] = train(ds, MlpArchitecture{}, config);
  (void)history;
  EXPECT_TRUE(predict(model, {}).empty());
  EXPECT_THROW(predict(model, {{1.0, 2.0}}), std::invalid_argument);
}

TEST(PredictMlp, AgreesWithEvalAccuracyPath) {
  const Dataset ds = standardized_blobs(240, 0.25, 39);
  const auto [model, history] = train(ds, MlpArchitecture{}, TrainConfig{});
  const auto predictions = predict(model, ds.features);
  EXPECT_DOUBLE_EQ(accuracy(predictions, ds.labels), history.accuracy.back());
}

TEST(RandomizedSearch, SingleDrawIsTheBest) {
  const Dataset ds = standardized_blobs(90, 0.3, 40);
  RandomSearchSpec spec;
  spec.draws = 1;
  spec.folds = 3;
  spec.base.epochs = 3;
  const RandomSearchResult result = randomized_search(ds, spec);
  ASSERT_EQ(result.candidates.size(), 1u);
  EXPECT_EQ(result.best_index, 0);
  EXPECT_EQ(result.candidates[0].fold_scores.size(), 3u);
}

TEST(RandomizedSearch, FoldsPartitionTheTrainingRows) {
  // Distinct feature values identify rows across the fold split.
  Dataset ds;
  ds.feature_names = {"x"};
  for (int i = 0; i < 30; ++i) {
    ds.features.push_back({double(i)});
    ds.labels.push_back(i % 3);
  }
  const std::size_t folds = 3;
  std::vector<std::size_t> order(ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) order[i] = i;
  Rng fold_rng(derive_seed(17, 2));
  fold_rng.shuffle(order);
  std::vector<int> seen(ds.size(), 0);
  for (std::size_t f = 0; f < folds; ++f) {
    const std::size_t begin = f * ds.size() / folds;
    const std::size_t end = (f + 1) * ds.size() / folds;
    for (std::size_t i = begin; i < end; ++i) ++seen[order[i]];
  }
  for (int count : seen) EXPECT_EQ(count, 1);
}

TEST(RandomizedSearch, StrongConfigurationBeatsDegenerate) {
  const Dataset ds = standardized_blobs(300, 0.25, 41);
  RandomSearchSpec spec;
  spec.draws = 2;  // covers the whole 2-configuration space
  spec.folds = 3;
  spec.hidden_dims_choices = {{32, 32}, {1, 1}};
  spec.activation_choices = {Activation::kRelu};
  spec.optimizer_choices = {OptimizerKind::kAdam};
  spec.base.epochs = 25;
  const RandomSearchResult result = randomized_search(ds, spec);
  ASSERT_EQ(result.candidates.size(), 2u);
  const auto& best = result.best();
  EXPECT_EQ(best.candidate.hidden_dims, (std::vector<int>{32, 32}));
  for (const auto& candidate : result.candidates) {
    if (candidate.candidate.hidden_dims == std::vector<int>{1, 1}) {
      EXPECT_GT(best.mean_score, candidate.mean_score);
    }
  }
}

TEST(RandomizedSearch, OversampledSpaceDeduplicatesWithWarning) {
  const Dataset ds = standardized_blobs(60, 0.3, 42);
  RandomSearchSpec spec;
  spec.draws = 9;
  spec.folds = 2;
  spec.hidden_dims_choices = {{4, 4}};
  spec.activation_choices = {Activation::kRelu, Activation::kTanh};
  spec.optimizer_choices = {OptimizerKind::kAdam};
  spec.base.epochs = 2;
  const RandomSearchResult result = randomized_search(ds, spec);
  EXPECT_EQ(result.candidates.size(), 2u);
  ASSERT_EQ(result.warnings.size(), 1u);
  EXPECT_NE(result.warnings[0].find("exceed"), std::string::npos);
}

TEST(RandomizedSearch, FoldLevelRunsAreAllLogged) {
  const Dataset ds = standardized_blobs(90, 0.3, 43);
  RandomSearchSpec spec;
  spec.draws = 4;
  spec.folds = 3;
  spec.hidden_dims_choices = {{4, 4}, {8, 8}};
  spec.activation_choices = {Activation::kRelu};
  spec.optimizer_choices = {OptimizerKind::kAdam, OptimizerKind::kSgd};
  spec.base.epochs = 2;
  const RandomSearchResult result = randomized_search(ds, spec);
  std::size_t fold_runs = 0;
  for (const auto& candidate : result.candidates) {
    fold_runs += candidate.fold_scores.size();
  }
  EXPECT_EQ(fold_runs, 12u);
}

TEST(RandomizedSearch, MseCompatSelectsByLowestError) {
  const Dataset ds = standardized_blobs(120, 0.3, 44);
  RandomSearchSpec spec;
  spec.draws = 2;
  spec.folds = 2;
  spec.hidden_dims_choices = {{16, 16}, {1, 1}};
  spec.activation_choices = {Activation::kRelu};
  spec.optimizer_choices = {OptimizerKind::kAdam};
  spec.selection_metric = SelectionMetric::kMseOneHot;
  spec.base.epochs = 15;
  const RandomSearchResult result = randomized_search(ds, spec);
  const auto& best = result.best();
  for (const auto& candidate : result.candidates) {
    EXPECT_LE(best.mean_score, candidate.mean_score);
  }
}

}  // namespace
}  // namespace galaxyml

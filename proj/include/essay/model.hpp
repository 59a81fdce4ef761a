// model.hpp
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// PCA feature selection, bagged regression-tree ensembles (random forest,
// bagging, random subspace) and evaluation against manual scores.

#ifndef ESSAY_MODEL_HPP
#define ESSAY_MODEL_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "essay/numeric.hpp"

namespace essay {

// Standardizes columns (dropping zero-variance ones), eigen-decomposes the
// covariance, keeps the smallest leading component set reaching the variance
// target and unions the top features by absolute loading per kept component.
// Returns original column indices, ascending.
std::vector<std::size_t> pca_select(const Matrix& features, double variance_target,
                                    std::size_t top_per_component);

// Product-moment correlation. Errors when either input is constant.
double pearson(const std::vector<double>& a, const std::vector<double>& b);

// Two-tailed t-test of r != 0 with n-2 degrees of freedom.
bool correlation_significant(double r, std::size_t n, double alpha = 0.01);

// Flat preorder tree: leaves have feature == -1 and value set.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  double value = 0.0;
  std::int32_t left = -1;   // index into nodes
  std::int32_t right = -1;

  bool is_leaf() const { return feature < 0; }
};

struct RegressionTree {
  std::vector<TreeNode> nodes;

  double predict(const std::vector<double>& x) const;
};

enum class EnsembleMode { random_forest, bagging, random_subspace };

struct Hyperparameters {
  std::size_t tree_count = 300;
  // Per-node feature sample (random_forest) or per-tree subset size
  // (random_subspace); 0 = mode default (ceil(dims/3), ceil(dims/2)).
  std::size_t feature_sample = 0;
  std::size_t min_leaf = 5;
  std::size_t max_depth = 0;  // 0 = unlimited
};

struct Ensemble {
  EnsembleMode mode = EnsembleMode::random_forest;
  Hyperparameters params;
  std::uint64_t seed = 0;
  std::size_t dimensionality = 0;
  std::vector<RegressionTree> trees;
  std::vector<std::vector<std::size_t>> tree_feature_subsets;  // subspace mode

  double predict(const std::vector<double>& x) const;  // raw (mean of trees)
};

double clamp_score(double raw);  // into [1, 10]

Ensemble train_ensemble(const Matrix& x, const std::vector<double>& y, EnsembleMode mode,
                        const Hyperparameters& params, std::uint64_t seed);

// Internal training seam, exposed so the mode-reduction equivalences can be
// exercised directly: bagging == {bootstrap, no sampling}, random forest ==
// {bootstrap, per-node m}, random subspace == {no bootstrap, per-tree subset}.
struct TrainPolicy {
  bool bootstrap_rows = true;
  std::size_t per_node_features = 0;  // 0 = all
  std::size_t per_tree_subspace = 0;  // 0 = all
};

std::vector<RegressionTree> train_trees(const Matrix& x, const std::vector<double>& y,
                                        const TrainPolicy& policy, const Hyperparameters& params,
                                        std::uint64_t seed,
                                        std::vector<std::vector<std::size_t>>* subsets_out);

struct EvaluationReport {
  double pearson_r = 0.0;
  double mae = 0.0;
  std::size_t n = 0;
  bool significant_at_0_01 = false;
};

// Pearson on raw predictions, MAE on clamped predictions.
EvaluationReport evaluate(const Ensemble& ensemble, const Matrix& x_test,
                          const std::vector<double>& y_test);

// Versioned JSON model file: feature order, PCA selection, hyperparameters
// and preorder-serialized trees.
struct ScoringModel {
  int version = 1;
  std::vector<std::string> feature_names;      // full declared order
  std::vector<std::size_t> selected_features;  // indices into feature_names
  Ensemble ensemble;

  // Predicts from a full-width feature vector by applying the selection.
  double predict_raw(const std::vector<double>& full_features) const;
};

void save_model(const std::string& path, const ScoringModel& model);
ScoringModel load_model(const std::string& path);

const char* ensemble_mode_name(EnsembleMode mode);

}  // namespace essay

#endif  // ESSAY_MODEL_HPP

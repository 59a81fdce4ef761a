// model.cpp
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

#include "essay/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <optional>
#include <set>

#include <json.hpp>

#include "essay/error.hpp"
#include "essay/rng.hpp"

namespace essay {

std::vector<std::size_t> pca_select(const Matrix& features, double variance_target,
                                    std::size_t top_per_component) {
  const std::size_t n = features.rows();
  const std::size_t dims = features.cols();
  if (n < 2) throw Error("model", "pca needs at least 2 rows");
  if (dims < 1) throw Error("model", "pca needs at least 1 feature");
  if (!(variance_target > 0.0 && variance_target <= 1.0))
    throw Error("model", "pca variance target must be in (0,1]");
  if (top_per_component < 1) throw Error("model", "pca top_per_component must be >= 1");

  std::vector<double> mean(dims, 0.0), stddev(dims, 0.0);
  for (std::size_t j = 0; j < dims; ++j) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m += features(i, j);
    m /= static_cast<double>(n);
    double v = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double d = features(i, j) - m;
      v += d * d;
    }
    mean[j] = m;
    stddev[j] = std::sqrt(v / static_cast<double>(n - 1));
  }

  // Numerically-constant columns never enter the decomposition.
  std::vector<std::size_t> live;
  for (std::size_t j = 0; j < dims; ++j)
    if (stddev[j] > 1e-12 * (std::abs(mean[j]) + 1.0)) live.push_back(j);
  if (live.empty()) throw Error("model", "all feature columns have zero variance");

  const std::size_t d = live.size();
  Matrix z(n, d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j)
      z(i, j) = (features(i, live[j]) - mean[live[j]]) / stddev[live[j]];

  Matrix cov(d, d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = a; b < d; ++b) {
      double s = 0.0;
      for (std::size_t i = 0; i < n; ++i) s += z(i, a) * z(i, b);
      s /= static_cast<double>(n - 1);
      cov(a, b) = s;
      cov(b, a) = s;
    }

  EigenDecomposition eig = jacobi_eigen_symmetric(cov);
  double total = 0.0;
  for (double& v : eig.values) {
    if (v < 0.0) v = 0.0;
    total += v;
  }
  if (total <= 0.0) throw Error("model", "covariance has no variance to explain");

  std::size_t components = 0;
  double cum = 0.0;
  while (components < d) {
    cum += eig.values[components];
    ++components;
    if (cum / total >= variance_target - 1e-12) break;
  }

  std::set<std::size_t> selected;
  for (std::size_t c = 0; c < components; ++c) {
    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return std::abs(eig.vectors(a, c)) > std::abs(eig.vectors(b, c));
    });
    for (std::size_t t = 0; t < std::min(top_per_component, d); ++t)
      selected.insert(live[order[t]]);
  }
  return {selected.begin(), selected.end()};
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw Error("model", "pearson: length mismatch");
  const std::size_t n = a.size();
  if (n < 2) throw Error("model", "pearson: need at least 2 pairs");
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= static_cast<double>(n);
  mb /= static_cast<double>(n);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double da = a[i] - ma;
    double db = b[i] - mb;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) throw Error("model", "pearson undefined for constant input");
  return sab / (std::sqrt(saa) * std::sqrt(sbb));
}

bool correlation_significant(double r, std::size_t n, double alpha) {
  if (n < 3) throw Error("model", "significance test needs n >= 3");
  double denom = 1.0 - r * r;
  if (denom <= 0.0) return true;  // |r| = 1: zero tail mass
  double t = r * std::sqrt(static_cast<double>(n - 2) / denom);
  double p = student_t_two_tailed(t, static_cast<double>(n - 2));
  return p < alpha;
}

double RegressionTree::predict(const std::vector<double>& x) const {
  std::size_t at = 0;
  while (!nodes[at].is_leaf()) {
    const TreeNode& node = nodes[at];
    at = x[static_cast<std::size_t>(node.feature)] <= node.threshold
             ? static_cast<std::size_t>(node.left)
             : static_cast<std::size_t>(node.right);
  }
  return nodes[at].value;
}

double Ensemble::predict(const std::vector<double>& x) const {
  if (x.size() != dimensionality)
    throw Error("model", "prediction input has " + std::to_string(x.size()) +
                             " features, model expects " + std::to_string(dimensionality));
  double sum = 0.0;
  for (const RegressionTree& t : trees) sum += t.predict(x);
  return sum / static_cast<double>(trees.size());
}

double clamp_score(double raw) { return std::min(10.0, std::max(1.0, raw)); }

namespace {

// Distinct draw of m elements from [0, pool_size), sorted ascending. Skips
// the RNG entirely when m covers the pool, so full-sample configurations
// consume the same stream as no-sample ones.
std::vector<std::size_t> sample_features(std::size_t pool_size, std::size_t m, Rng& rng) {
  std::vector<std::size_t> pool(pool_size);
  std::iota(pool.begin(), pool.end(), 0);
  if (m == 0 || m >= pool_size) return pool;
  for (std::size_t i = 0; i < m; ++i) {
    std::size_t j = i + rng.below(pool_size - i);
    std::swap(pool[i], pool[j]);
  }
  pool.resize(m);
  std::sort(pool.begin(), pool.end());
  return pool;
}

class TreeBuilder {
 public:
  TreeBuilder(const Matrix& x, const std::vector<double>& y,
              const std::vector<std::size_t>& allowed, std::size_t per_node_m,
              const Hyperparameters& params, Rng& rng)
      : x_(x), y_(y), allowed_(allowed), per_node_m_(per_node_m), params_(params), rng_(rng) {}

  RegressionTree build(std::vector<std::size_t> samples) {
    RegressionTree tree;
    build_node(tree.nodes, std::move(samples), 0);
    return tree;
  }

 private:
  std::int32_t build_node(std::vector<TreeNode>& nodes, std::vector<std::size_t> samples,
                          std::size_t depth) {
    const std::int32_t index = static_cast<std::int32_t>(nodes.size());
    nodes.emplace_back();

    double sum = 0.0;
    for (std::size_t i : samples) sum += y_[i];
    const double mean = sum / static_cast<double>(samples.size());

    bool depth_capped = params_.max_depth != 0 && depth >= params_.max_depth;
    bool constant = true;
    for (std::size_t i : samples) {
      if (y_[i] != y_[samples[0]]) {
        constant = false;
        break;
      }
    }
    if (samples.size() < 2 * params_.min_leaf || depth_capped || constant) {
      nodes[static_cast<std::size_t>(index)].value = mean;
      return index;
    }

    std::vector<std::size_t> candidates =
        per_node_m_ > 0 && per_node_m_ < allowed_.size()
            ? sample_from_allowed()
            : allowed_;

    int best_feature = -1;
    double best_threshold = 0.0;
    double best_cost = std::numeric_limits<double>::infinity();
    const std::size_t count = samples.size();

    std::vector<std::size_t> sorted = samples;
    for (std::size_t f : candidates) {
      std::stable_sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
        return x_(a, f) < x_(b, f);
      });
      double total_y = 0.0, total_y2 = 0.0;
      for (std::size_t i : sorted) {
        total_y += y_[i];
        total_y2 += y_[i] * y_[i];
      }
      double left_y = 0.0, left_y2 = 0.0;
      for (std::size_t p = 1; p < count; ++p) {
        double yv = y_[sorted[p - 1]];
        left_y += yv;
        left_y2 += yv * yv;
        if (x_(sorted[p - 1], f) == x_(sorted[p], f)) continue;  // no boundary here
        if (p < params_.min_leaf || count - p < params_.min_leaf) continue;
        double nl = static_cast<double>(p);
        double nr = static_cast<double>(count - p);
        double right_y = total_y - left_y;
        double right_y2 = total_y2 - left_y2;
        double cost = (left_y2 - left_y * left_y / nl) + (right_y2 - right_y * right_y / nr);
        if (cost < best_cost) {
          best_cost = cost;
          best_feature = static_cast<int>(f);
          best_threshold = 0.5 * (x_(sorted[p - 1], f) + x_(sorted[p], f));
        }
      }
    }

    if (best_feature < 0) {
      nodes[static_cast<std::size_t>(index)].value = mean;
      return index;
    }

    std::vector<std::size_t> left, right;
    for (std::size_t i : samples) {
      if (x_(i, static_cast<std::size_t>(best_feature)) <= best_threshold) left.push_back(i);
      else right.push_back(i);
    }
    samples.clear();
    samples.shrink_to_fit();

    std::int32_t left_index = build_node(nodes, std::move(left), depth + 1);
    std::int32_t right_index = build_node(nodes, std::move(right), depth + 1);
    TreeNode& node = nodes[static_cast<std::size_t>(index)];
    node.feature = best_feature;
    node.threshold = best_threshold;
    node.left = left_index;
    node.right = right_index;
    return index;
  }

  std::vector<std::size_t> sample_from_allowed() {
    std::vector<std::size_t> picked = sample_features(allowed_.size(), per_node_m_, rng_);
    for (std::size_t& p : picked) p = allowed_[p];
    return picked;
  }

  const Matrix& x_;
  const std::vector<double>& y_;
  const std::vector<std::size_t>& allowed_;
  std::size_t per_node_m_;
  const Hyperparameters& params_;
  Rng& rng_;
};

}  // namespace

std::vector<RegressionTree> train_trees(const Matrix& x, const std::vector<double>& y,
                                        const TrainPolicy& policy, const Hyperparameters& params,
                                        std::uint64_t seed,
                                        std::vector<std::vector<std::size_t>>* subsets_out) {
  const std::size_t n = x.rows();
  const std::size_t dims = x.cols();
  if (n != y.size()) throw Error("model", "row count and target count differ");
  if (n < 2) throw Error("model", "training needs at least 2 rows");
  if (dims < 1) throw Error("model", "training needs at least 1 feature");
  if (params.tree_count < 1) throw Error("model", "tree count must be >= 1");
  if (params.min_leaf < 1) throw Error("model", "min leaf must be >= 1");
  if (policy.per_node_features > dims || policy.per_tree_subspace > dims)
    throw Error("model", "feature sample exceeds dimensionality");

  std::vector<RegressionTree> trees;
  trees.reserve(params.tree_count);
  if (subsets_out) subsets_out->clear();

  std::vector<std::size_t> all(dims);
  std::iota(all.begin(), all.end(), 0);

  for (std::size_t t = 0; t < params.tree_count; ++t) {
    Rng rng(mix_seed(seed, t));

    std::vector<std::size_t> allowed = all;
    if (policy.per_tree_subspace > 0 && policy.per_tree_subspace < dims)
      allowed = sample_features(dims, policy.per_tree_subspace, rng);
    if (subsets_out) subsets_out->push_back(allowed);

    std::vector<std::size_t> samples;
    samples.reserve(n);
    if (policy.bootstrap_rows) {
      for (std::size_t i = 0; i < n; ++i) samples.push_back(rng.below(n));
    } else {
      for (std::size_t i = 0; i < n; ++i) samples.push_back(i);
    }

    TreeBuilder builder(x, y, allowed, policy.per_node_features, params, rng);
    trees.push_back(builder.build(std::move(samples)));
  }
  return trees;
}

Ensemble train_ensemble(const Matrix& x, const std::vector<double>& y, EnsembleMode mode,
                        const Hyperparameters& params, std::uint64_t seed) {
  const std::size_t dims = x.cols();
  Hyperparameters resolved = params;
  if (resolved.feature_sample == 0) {
    if (mode == EnsembleMode::random_forest) resolved.feature_sample = (dims + 2) / 3;
    else if (mode == EnsembleMode::random_subspace) resolved.feature_sample = (dims + 1) / 2;
  }
  if (resolved.feature_sample > dims)
    throw Error("model", "feature sample " + std::to_string(resolved.feature_sample) +
                             " exceeds dimensionality " + std::to_string(dims));

  TrainPolicy policy;
  switch (mode) {
    case EnsembleMode::random_forest:
      policy = {true, resolved.feature_sample, 0};
      break;
    case EnsembleMode::bagging:
      policy = {true, 0, 0};
      break;
    case EnsembleMode::random_subspace:
      policy = {false, 0, resolved.feature_sample};
      break;
  }

  Ensemble ensemble;
  ensemble.mode = mode;
  ensemble.params = resolved;
  ensemble.seed = seed;
  ensemble.dimensionality = dims;
  std::vector<std::vector<std::size_t>>* subsets =
      mode == EnsembleMode::random_subspace ? &ensemble.tree_feature_subsets : nullptr;
  ensemble.trees = train_trees(x, y, policy, resolved, seed, subsets);
  return ensemble;
}

EvaluationReport evaluate(const Ensemble& ensemble, const Matrix& x_test,
                          const std::vector<double>& y_test) {
  if (x_test.rows() != y_test.size()) throw Error("model", "test rows and targets differ");
  if (x_test.rows() == 0) throw Error("model", "test partition is empty");
  EvaluationReport report;
  report.n = y_test.size();
  std::vector<double> raw(y_test.size());
  std::vector<double> row(x_test.cols());
  double abs_sum = 0.0;
  for (std::size_t i = 0; i < y_test.size(); ++i) {
    for (std::size_t j = 0; j < x_test.cols(); ++j) row[j] = x_test(i, j);
    raw[i] = ensemble.predict(row);
    abs_sum += std::abs(clamp_score(raw[i]) - y_test[i]);
  }
  report.mae = abs_sum / static_cast<double>(y_test.size());
  report.pearson_r = pearson(raw, y_test);
  report.significant_at_0_01 =
      y_test.size() >= 3 && correlation_significant(report.pearson_r, y_test.size(), 0.01);
  return report;
}

const char* ensemble_mode_name(EnsembleMode mode) {
  switch (mode) {
    case EnsembleMode::random_forest: return "random_forest";
    case EnsembleMode::bagging: return "bagging";
    case EnsembleMode::random_subspace: return "random_subspace";
  }
  return "random_forest";
}

namespace {

std::optional<EnsembleMode> mode_from_name(const std::string& name) {
  if (name == "random_forest") return EnsembleMode::random_forest;
  if (name == "bagging") return EnsembleMode::bagging;
  if (name == "random_subspace") return EnsembleMode::random_subspace;
  return std::nullopt;
}

}  // namespace

double ScoringModel::predict_raw(const std::vector<double>& full_features) const {
  if (full_features.size() != feature_names.size())
    throw Error("model", "feature vector has " + std::to_string(full_features.size()) +
                             " values, model expects " + std::to_string(feature_names.size()));
  std::vector<double> selected;
  selected.reserve(selected_features.size());
  for (std::size_t idx : selected_features) selected.push_back(full_features[idx]);
  return ensemble.predict(selected);
}

void save_model(const std::string& path, const ScoringModel& model) {
  nlohmann::json obj;
  obj["version"] = model.version;
  obj["feature_names"] = model.feature_names;
  obj["selected_features"] = model.selected_features;
  obj["mode"] = ensemble_mode_name(model.ensemble.mode);
  obj["seed"] = model.ensemble.seed;
  obj["dimensionality"] = model.ensemble.dimensionality;
  obj["hyperparameters"] = {{"tree_count", model.ensemble.params.tree_count},
                            {"feature_sample", model.ensemble.params.feature_sample},
                            {"min_leaf", model.ensemble.params.min_leaf},
                            {"max_depth", model.ensemble.params.max_depth}};
  nlohmann::json trees = nlohmann::json::array();
  for (const RegressionTree& tree : model.ensemble.trees) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const TreeNode& n : tree.nodes)
      nodes.push_back(nlohmann::json::array({n.feature, n.threshold, n.value, n.left, n.right}));
    trees.push_back(std::move(nodes));
  }
  obj["trees"] = std::move(trees);
  obj["tree_feature_subsets"] = model.ensemble.tree_feature_subsets;

  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("model", "cannot write model file: " + tmp);
    out << obj.dump() << '\n';
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw Error("model", "cannot replace model file: " + path);
}

ScoringModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("model", "cannot open model file: " + path);
  nlohmann::json obj;
  try {
    in >> obj;
  } catch (const nlohmann::json::exception& e) {
    throw Error("model", path + ": invalid JSON: " + e.what());
  }
  ScoringModel model;
  try {
    model.version = obj.at("version").get<int>();
    if (model.version != 1)
      throw Error("model", path + ": unsupported model version " + std::to_string(model.version));
    model.feature_names = obj.at("feature_names").get<std::vector<std::string>>();
    model.selected_features = obj.at("selected_features").get<std::vector<std::size_t>>();
    auto mode = mode_from_name(obj.at("mode").get<std::string>());
    if (!mode) throw Error("model", path + ": unknown ensemble mode");
    model.ensemble.mode = *mode;
    model.ensemble.seed = obj.at("seed").get<std::uint64_t>();
    model.ensemble.dimensionality = obj.at("dimensionality").get<std::size_t>();
    const auto& hp = obj.at("hyperparameters");
    model.ensemble.params.tree_count = hp.at("tree_count").get<std::size_t>();
    model.ensemble.params.feature_sample = hp.at("feature_sample").get<std::size_t>();
    model.ensemble.params.min_leaf = hp.at("min_leaf").get<std::size_t>();
    model.ensemble.params.max_depth = hp.at("max_depth").get<std::size_t>();
    for (const auto& jtree : obj.at("trees")) {
      RegressionTree tree;
      for (const auto& jnode : jtree) {
        TreeNode n;
        n.feature = jnode.at(0).get<int>();
        n.threshold = jnode.at(1).get<double>();
        n.value = jnode.at(2).get<double>();
        n.left = jnode.at(3).get<std::int32_t>();
        n.right = jnode.at(4).get<std::int32_t>();
        tree.nodes.push_back(n);
      }
      if (tree.nodes.empty()) throw Error("model", path + ": empty tree");
      tree.nodes.shrink_to_fit();
      model.ensemble.trees.push_back(std::move(tree));
    }
    model.ensemble.tree_feature_subsets =
        obj.at("tree_feature_subsets").get<std::vector<std::vector<std::size_t>>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error("model", path + ": missing or bad field: " + e.what());
  }
  if (model.ensemble.trees.empty()) throw Error("model", path + ": no trees");
  for (std::size_t idx : model.selected_features)
    if (idx >= model.feature_names.size())
      throw Error("model", path + ": selected feature index out of range");
  return model;
}

}  // namespace essay

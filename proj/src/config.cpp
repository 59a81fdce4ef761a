// config.cpp
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

#include "essay/config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "essay/error.hpp"

namespace essay {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t");
  return s.substr(a, b - a + 1);
}

std::string resolve(const std::string& base_dir, const std::string& path) {
  if (path.empty() || base_dir.empty()) return path;
  std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(base_dir) / p).string();
}

double parse_double(const std::string& v, const std::string& where) {
  try {
    std::size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing");
    return d;
  } catch (const std::exception&) {
    throw Error("config", where + ": expected a number, got '" + v + "'");
  }
}

long parse_int(const std::string& v, const std::string& where) {
  try {
    std::size_t pos = 0;
    long d = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing");
    return d;
  } catch (const std::exception&) {
    throw Error("config", where + ": expected an integer, got '" + v + "'");
  }
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin,
                            const std::string& base_dir) {
  RunConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string where = origin + ":" + std::to_string(lineno);
    std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) throw Error("config", where + ": expected key = value");
    std::string key = trim(stripped.substr(0, eq));
    std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) throw Error("config", where + ": empty key");

    if (key == "corpus") cfg.corpus_path = resolve(base_dir, value);
    else if (key == "corpus_format") {
      if (value == "csv") cfg.corpus_format = CorpusFormat::csv;
      else if (value == "jsonl") cfg.corpus_format = CorpusFormat::jsonl;
      else throw Error("config", where + ": corpus_format must be csv or jsonl");
    } else if (key == "dictionary") cfg.dictionary_path = resolve(base_dir, value);
    else if (key == "lexicon") cfg.lexicon_path = resolve(base_dir, value);
    else if (key == "rules") cfg.rules_path = resolve(base_dir, value);
    else if (key == "abbreviations") cfg.abbreviations_path = resolve(base_dir, value);
    else if (key == "whitelist") cfg.whitelist_path = resolve(base_dir, value);
    else if (key == "index") cfg.index_path = resolve(base_dir, value);
    else if (key == "model") cfg.model_path = resolve(base_dir, value);
    else if (key == "context_threshold") cfg.context_threshold = parse_double(value, where);
    else if (key == "whitelist_threshold") {
      long v = parse_int(value, where);
      if (v < 1) throw Error("config", where + ": whitelist_threshold must be >= 1");
      cfg.whitelist_threshold = static_cast<int>(v);
    } else if (key == "repetition_threshold") {
      cfg.cheat_thresholds.repetition = parse_double(value, where);
    } else if (key == "off_vocabulary_threshold") {
      cfg.cheat_thresholds.off_vocabulary = parse_double(value, where);
    } else if (key == "split_ratios") {
      std::array<double, 3> r{};
      std::istringstream parts(value);
      std::string piece;
      int count = 0;
      while (std::getline(parts, piece, ',')) {
        if (count >= 3) throw Error("config", where + ": split_ratios needs 3 numbers");
        r[static_cast<std::size_t>(count++)] = parse_double(trim(piece), where);
      }
      if (count != 3) throw Error("config", where + ": split_ratios needs 3 numbers");
      cfg.split_ratios = r;
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(parse_int(value, where));
    } else if (key == "lsa_k") {
      long v = parse_int(value, where);
      if (v < 0) throw Error("config", where + ": lsa_k must be >= 0");
      cfg.lsa_k = static_cast<std::size_t>(v);
    } else if (key == "lsa_weighting") {
      if (value == "tf") cfg.lsa_weighting = IndexWeighting::tf;
      else if (value == "tfidf") cfg.lsa_weighting = IndexWeighting::tfidf;
      else throw Error("config", where + ": lsa_weighting must be tf or tfidf");
    } else if (key == "topic_scope") {
      if (value == "topic") cfg.context_corpus_wide = false;
      else if (value == "corpus") cfg.context_corpus_wide = true;
      else throw Error("config", where + ": topic_scope must be topic or corpus");
    } else if (key == "ensemble_mode") {
      if (value == "random_forest") cfg.ensemble_mode = EnsembleMode::random_forest;
      else if (value == "bagging") cfg.ensemble_mode = EnsembleMode::bagging;
      else if (value == "random_subspace") cfg.ensemble_mode = EnsembleMode::random_subspace;
      else throw Error("config", where + ": unknown ensemble_mode '" + value + "'");
    } else if (key == "tree_count") {
      long v = parse_int(value, where);
      if (v < 1) throw Error("config", where + ": tree_count must be >= 1");
      cfg.hyperparameters.tree_count = static_cast<std::size_t>(v);
    } else if (key == "feature_sample") {
      long v = parse_int(value, where);
      if (v < 0) throw Error("config", where + ": feature_sample must be >= 0");
      cfg.hyperparameters.feature_sample = static_cast<std::size_t>(v);
    } else if (key == "min_leaf") {
      long v = parse_int(value, where);
      if (v < 1) throw Error("config", where + ": min_leaf must be >= 1");
      cfg.hyperparameters.min_leaf = static_cast<std::size_t>(v);
    } else if (key == "max_depth") {
      long v = parse_int(value, where);
      if (v < 0) throw Error("config", where + ": max_depth must be >= 0");
      cfg.hyperparameters.max_depth = static_cast<std::size_t>(v);
    } else if (key == "pca_variance_target") {
      cfg.pca_variance_target = parse_double(value, where);
      if (!(cfg.pca_variance_target > 0.0 && cfg.pca_variance_target <= 1.0))
        throw Error("config", where + ": pca_variance_target must be in (0,1]");
    } else if (key == "pca_top_per_component") {
      long v = parse_int(value, where);
      if (v < 1) throw Error("config", where + ": pca_top_per_component must be >= 1");
      cfg.pca_top_per_component = static_cast<std::size_t>(v);
    } else if (key == "coverage_granularity") {
      if (value == "bucket") cfg.coverage_granularity = CoverageGranularity::bucket;
      else if (value == "rule") cfg.coverage_granularity = CoverageGranularity::rule;
      else throw Error("config", where + ": coverage_granularity must be bucket or rule");
    } else if (key == "damping") {
      if (value == "harmonic") cfg.damping = DampingKind::harmonic;
      else if (value == "logarithmic") cfg.damping = DampingKind::logarithmic;
      else throw Error("config", where + ": damping must be harmonic or logarithmic");
    } else if (key.rfind("severity_", 0) == 0) {
      auto cat = category_from_name(key.substr(9));
      if (!cat) throw Error("config", where + ": unknown severity key '" + key + "'");
      double w = parse_double(value, where);
      if (!(w > 0.0)) throw Error("config", where + ": severity weights must be positive");
      cfg.severity.weights[static_cast<int>(*cat)] = w;
    } else {
      throw Error("config", where + ": unknown key '" + key + "'");
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("config", "cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string base_dir = std::filesystem::path(path).parent_path().string();
  return parse_config_text(ss.str(), path, base_dir);
}

}  // namespace essay

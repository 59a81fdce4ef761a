// config.hpp
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

#ifndef ESSAY_CONFIG_HPP
#define ESSAY_CONFIG_HPP

#include <array>
#include <cstdint>
#include <string>

#include "essay/corpus.hpp"
#include "essay/grammar.hpp"
#include "essay/model.hpp"
#include "essay/semantics.hpp"
#include "essay/spelling.hpp"

namespace essay {

// Every knob of the pipeline, loadable from a key = value config file (see
// the README for the key list). Paths are resolved relative to the config
// file's directory.
struct RunConfig {
  // resources
  std::string corpus_path;
  CorpusFormat corpus_format = CorpusFormat::csv;
  std::string dictionary_path;
  std::string lexicon_path;
  std::string rules_path;
  std::string abbreviations_path;
  std::string whitelist_path;
  std::string index_path;
  std::string model_path;

  // thresholds
  double context_threshold = 0.3;
  int whitelist_threshold = 5;
  CheatThresholds cheat_thresholds;

  // split
  std::array<double, 3> split_ratios = {0.6, 0.2, 0.2};
  std::uint64_t seed = 42;

  // semantic index
  std::size_t lsa_k = 0;  // 0 = min(50, docs - 1)
  IndexWeighting lsa_weighting = IndexWeighting::tfidf;
  bool context_corpus_wide = false;

  // model
  EnsembleMode ensemble_mode = EnsembleMode::random_forest;
  Hyperparameters hyperparameters;
  double pca_variance_target = 0.95;
  std::size_t pca_top_per_component = 2;

  // grammar / spelling
  SeverityProfile severity = SeverityProfile::defaults();
  CoverageGranularity coverage_granularity = CoverageGranularity::bucket;
  DampingKind damping = DampingKind::harmonic;
};

RunConfig load_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin,
                            const std::string& base_dir);

}  // namespace essay

#endif  // ESSAY_CONFIG_HPP

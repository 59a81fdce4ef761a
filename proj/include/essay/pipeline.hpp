// pipeline.hpp
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
// The batch commands behind the CLI: build-index, extract, train, score and
// whitelist curation. Kept in the library so tests drive the exact same
// code paths as the binary.

#ifndef ESSAY_PIPELINE_HPP
#define ESSAY_PIPELINE_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "essay/config.hpp"
#include "essay/features.hpp"
#include "essay/model.hpp"

namespace essay {

// Loads lexicon, abbreviations, rules, dictionary, whitelist (created fresh
// when the store file does not exist yet) and, when asked, the semantic
// index. Missing paths raise config errors naming the key.
ExtractionResources load_resources(const RunConfig& cfg, bool need_index);

// Grammar-corrects every corpus essay and builds the LSA index over the
// corrected texts. k = 0 resolves to min(50, docs - 1).
void run_build_index(const RunConfig& cfg, const std::string& corpus_path,
                     const std::string& out_path);

struct ExtractStats {
  std::size_t written = 0;
  std::size_t skipped = 0;
};

// Writes the feature CSV (header: essay_id + declared feature order) and a
// cheat-report JSONL sidecar. Lenient mode skips zero-word essays with a
// warning instead of failing. Tallying records unknown spellings into the
// whitelist store.
ExtractStats run_extract(const RunConfig& cfg, const std::string& corpus_path,
                         const std::string& features_out, const std::string& cheat_out,
                         bool lenient, bool tally);

struct FeatureFile {
  std::vector<std::string> essay_ids;
  std::vector<std::string> names;
  Matrix values;
};

void write_feature_file(const std::string& path, const FeatureFile& file);
FeatureFile read_feature_file(const std::string& path);

struct TrainOutcome {
  std::vector<std::string> selected_names;
  std::size_t train_size = 0;
  std::size_t validation_size = 0;
  std::size_t test_size = 0;
  EvaluationReport validation;
  EvaluationReport test;
};

// Splits, PCA-selects on the train partition, trains the ensemble and
// writes the model file. Reports validation and test metrics.
TrainOutcome run_train(const RunConfig& cfg, const std::string& features_path,
                       const std::string& corpus_path, const std::string& model_out);

// Scores one essay; returns the versioned JSON report.
nlohmann::json run_score(const RunConfig& cfg, const std::string& model_path,
                         const std::string& essay_text, const std::string& topic_id, bool tally);

// Whitelist curation. Mutations take an exclusive lock on <store>.lock.
std::vector<std::pair<std::string, long>> whitelist_pending(const std::string& store_path);
void whitelist_resolve(const std::string& store_path, const std::string& token,
                       WhitelistDecision decision);
nlohmann::json whitelist_stats(const std::string& store_path);

}  // namespace essay

#endif  // ESSAY_PIPELINE_HPP

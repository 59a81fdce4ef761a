// corpus.hpp
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
// Rated-essay corpus ingestion, deterministic train/validation/test splits
// and inter-rater agreement.

#ifndef ESSAY_CORPUS_HPP
#define ESSAY_CORPUS_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace essay {

enum class Split { train, validation, test, unassigned };

struct EssayRecord {
  std::string essay_id;
  std::string topic_id;
  std::string text;
  std::vector<int> rater_scores;  // each in [1,10]
  Split split = Split::unassigned;

  // Regression target: arithmetic mean of the rater scores.
  double manual_score() const;
};

enum class CorpusFormat { csv, jsonl };

// CSV header: essay_id,topic_id,score_r1,score_r2,text (RFC-4180 quoting).
// JSONL: one object per line with essay_id, topic_id, rater_scores, text.
// Line endings inside text are normalized to "\n". Errors name the line.
std::vector<EssayRecord> load_corpus(const std::string& path, CorpusFormat format);

// Writes records back out in the given format (used by tooling and tests).
void save_corpus(const std::string& path, const std::vector<EssayRecord>& records,
                 CorpusFormat format);

// Seed-deterministic shuffle, then floor allocation per ratio with the
// remainder going to train. Requires >= 3 records and ratios summing to 1.
void split_corpus(std::vector<EssayRecord>& records, const std::array<double, 3>& ratios,
                  std::uint64_t seed);

enum class KappaWeighting { linear, quadratic };

struct KappaResult {
  double value = 0.0;
  // Set when both raters are constant and equal: there is no chance
  // disagreement to normalize by, and the value is defined as 1.
  bool degenerate = false;
};

// Cohen's weighted kappa over the fixed 1..10 score scale.
// kappa = 1 - sum(w*o) / sum(w*e), w_ij = |i-j|/(k-1) or its square.
KappaResult cohen_weighted_kappa(const std::vector<int>& a, const std::vector<int>& b,
                                 KappaWeighting weighting);

const char* split_name(Split s);

}  // namespace essay

#endif  // ESSAY_CORPUS_HPP

// semantics.hpp
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
// Latent semantic space over corpus essays (n-grams 1..5, truncated SVD),
// fold-in projection and topical-relevance scoring, entity-grid coherence
// features, and cheat-attempt detection.

#ifndef ESSAY_SEMANTICS_HPP
#define ESSAY_SEMANTICS_HPP

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "essay/numeric.hpp"
#include "essay/spelling.hpp"
#include "essay/text.hpp"

namespace essay {

enum class IndexWeighting { tf, tfidf };

struct IndexDocument {
  std::string essay_id;
  std::string topic_id;
  std::string corrected_text;  // grammar-corrected form, per the pipeline
};

// The SVD factors are kept implicitly: U is never materialized (it is
// terms x k and the term space is large); fold-in works from the weighted
// document columns, V and sigma alone.
struct SemanticIndex {
  int version = 1;
  IndexWeighting weighting = IndexWeighting::tfidf;
  std::size_t k = 0;                      // requested rank
  std::vector<double> sigma;              // kept singular values, non-increasing
  std::vector<std::string> vocabulary;    // term id = position (sorted n-grams)
  std::vector<double> idf;                // per term; all 1.0 in tf mode
  std::vector<std::string> doc_ids;
  std::vector<std::string> topic_ids;
  Matrix projections;                     // docs x kept-rank; row = stored essay projection
  // Sparse weighted term-document columns, sorted by term id.
  std::vector<std::vector<std::pair<std::uint32_t, double>>> doc_vectors;

  std::size_t kept_rank() const { return sigma.size(); }
  std::size_t term_id(const std::string& ngram) const;  // npos when absent
  bool has_topic(const std::string& topic_id) const;
  std::vector<std::string> known_topics() const;
};

// Word-token n-grams of length n_min..n_max, lowercase, space-joined, never
// crossing sentence boundaries. Returns occurrence counts.
std::map<std::string, int> extract_ngrams(const Document& doc, int n_min = 1, int n_max = 5);

// Builds the weighted term-document matrix and its rank-min(k, rank)
// truncated SVD via the docs-side Gram matrix. Deterministic; singular
// vector signs are canonicalized.
SemanticIndex build_index(const std::vector<IndexDocument>& essays, std::size_t k,
                          IndexWeighting weighting, const AbbreviationSet& abbrevs);

// Fold-in projection q^T U_k Sigma_k^-1. Out-of-vocabulary n-grams are
// ignored; a fully out-of-vocabulary or empty essay projects to zero.
std::vector<double> project_essay(const SemanticIndex& index, const std::string& corrected_text,
                                  const AbbreviationSet& abbrevs);

struct ContextScore {
  double max_cosine = 0.0;
  bool on_topic = false;
};

// Max cosine against stored projections of the matching topic (or the whole
// corpus with topic_id = "*"). Unknown topic is an error.
ContextScore context_score(const SemanticIndex& index, const std::string& corrected_text,
                           const std::string& topic_id, double threshold,
                           const AbbreviationSet& abbrevs);

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b);

enum class GridRole : int { subject = 0, object = 1, other = 2, absent = 3 };
constexpr int kGridRoleCount = 4;

struct EntityGrid {
  std::vector<std::string> entities;  // normalized, in order of first appearance
  // grid[e][s]: role of entity e in sentence s.
  std::vector<std::vector<GridRole>> grid;
  std::size_t sentence_count = 0;
};

// Entities are lexical, non-verb word forms. Role: subject when the first
// occurrence precedes the sentence's first verb-listed token, object when it
// follows, other when the sentence has no verb-listed token.
EntityGrid build_entity_grid(const Document& doc, const WordClassLexicon& lexicon);

constexpr int kCoherenceFeatureCount = kGridRoleCount * kGridRoleCount;

struct CoherenceFeatures {
  // P(r1 -> r2) over adjacent sentences, row-major in role order S,O,X,-.
  std::array<double, kCoherenceFeatureCount> transitions{};
  bool degenerate = false;  // fewer than 2 sentences or no entities
};

CoherenceFeatures coherence_features(const EntityGrid& grid);

struct CheatThresholds {
  double repetition = 0.3;
  double off_vocabulary = 0.4;
  double context = 0.3;
};

struct CheatReport {
  double repetition_score = 0.0;       // 1 - distinct/total sentence 5-grams
  bool on_topic = false;
  double off_vocabulary_ratio = 0.0;
  double context_max_cosine = 0.0;
  bool flag_repeated_content = false;
  bool flag_out_of_context = false;
  bool flag_irrelevant_words = false;
};

CheatReport detect_cheating(const Document& doc, const std::string& corrected_text,
                            const SemanticIndex& index, const std::string& topic_id,
                            const Dictionary& dict, const WhitelistStore& wl,
                            const CheatThresholds& thresholds, const AbbreviationSet& abbrevs);

void save_index(const std::string& path, const SemanticIndex& index);
SemanticIndex load_index(const std::string& path);

}  // namespace essay

#endif  // ESSAY_SEMANTICS_HPP

// features.hpp
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
// The per-essay feature vector in its fixed declared order, and the
// extraction pipeline shared by the CLI and the test harnesses.

#ifndef ESSAY_FEATURES_HPP
#define ESSAY_FEATURES_HPP

#include <string>
#include <vector>

#include "essay/grammar.hpp"
#include "essay/semantics.hpp"
#include "essay/spelling.hpp"
#include "essay/text.hpp"

namespace essay {

struct FeatureVector {
  std::vector<double> values;  // parallel to feature_names()

  // Declared order: grammar_error_density, grammar_error_density_weighted,
  // grammar_error_coverage, spelling_error_density, spelling_error_coverage,
  // readability, lexical_density, context_max_cosine, 16 coherence
  // transition probabilities.
  static const std::vector<std::string>& feature_names();
  static std::size_t dimensionality() { return feature_names().size(); }

  double at(const std::string& name) const;
};

// Immutable resources the extractor needs. The whitelist is a snapshot;
// tally updates happen outside, on the caller's store.
struct ExtractionResources {
  WordClassLexicon lexicon;
  AbbreviationSet abbreviations;
  std::vector<GrammarRule> rules;
  Dictionary dictionary;
  WhitelistStore whitelist;
  SemanticIndex index;
  SeverityProfile severity = SeverityProfile::defaults();
  CoverageGranularity coverage_granularity = CoverageGranularity::bucket;
  double context_threshold = 0.3;
  CheatThresholds cheat_thresholds;
  DampingKind damping = DampingKind::harmonic;
};

struct EssayAnalysis {
  FeatureVector features;
  std::vector<GrammarFinding> grammar_findings;
  std::vector<SpellingFinding> spelling_findings;
  CheatReport cheat;
  std::string corrected_text;
  bool coherence_degenerate = false;
};

// Full pipeline for one essay: document analysis, grammar pass, correction,
// spelling pass, stylometrics, context projection, entity-grid coherence and
// cheat detection. Throws on zero-word essays and unknown topics.
EssayAnalysis analyze_essay(const std::string& text, const std::string& topic_id,
                            const ExtractionResources& resources);

}  // namespace essay

#endif  // ESSAY_FEATURES_HPP

// features.cpp
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

#include "essay/features.hpp"

#include "essay/error.hpp"
#include "essay/stylometrics.hpp"

namespace essay {

const std::vector<std::string>& FeatureVector::feature_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n = {
        "grammar_error_density",
        "grammar_error_density_weighted",
        "grammar_error_coverage",
        "spelling_error_density",
        "spelling_error_coverage",
        "readability",
        "lexical_density",
        "context_max_cosine",
    };
    static const char* roles = "soxn";  // subject, object, other, absent
    for (int a = 0; a < kGridRoleCount; ++a)
      for (int b = 0; b < kGridRoleCount; ++b)
        n.push_back(std::string("coherence_") + roles[a] + roles[b]);
    return n;
  }();
  return names;
}

double FeatureVector::at(const std::string& name) const {
  const auto& names = feature_names();
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return values[i];
  throw Error("features", "unknown feature name '" + name + "'");
}

EssayAnalysis analyze_essay(const std::string& text, const std::string& topic_id,
                            const ExtractionResources& resources) {
  EssayAnalysis out;
  Document doc = make_document(text, resources.lexicon, resources.abbreviations);
  if (doc.word_count() == 0) throw Error("extract", "essay has no words");

  out.grammar_findings = check_grammar(doc, resources.rules);
  out.corrected_text = apply_corrections(doc, out.grammar_findings);
  out.spelling_findings =
      check_spelling(doc, resources.dictionary, resources.whitelist, resources.damping);

  ContextScore context = context_score(resources.index, out.corrected_text, topic_id,
                                       resources.context_threshold, resources.abbreviations);

  EntityGrid grid = build_entity_grid(doc, resources.lexicon);
  CoherenceFeatures coherence = coherence_features(grid);
  out.coherence_degenerate = coherence.degenerate;

  out.cheat = detect_cheating(doc, out.corrected_text, resources.index, topic_id,
                              resources.dictionary, resources.whitelist,
                              resources.cheat_thresholds, resources.abbreviations);

  auto& v = out.features.values;
  v.reserve(FeatureVector::dimensionality());
  v.push_back(grammar_error_density(out.grammar_findings, doc, false, resources.severity));
  v.push_back(grammar_error_density(out.grammar_findings, doc, true, resources.severity));
  v.push_back(grammar_error_coverage(out.grammar_findings, doc, resources.coverage_granularity));
  v.push_back(spelling_error_density(out.spelling_findings, doc));
  v.push_back(spelling_error_coverage(out.spelling_findings, doc));
  v.push_back(flesch_kincaid_grade(doc));
  v.push_back(lexical_density(doc, resources.lexicon));
  v.push_back(context.max_cosine);
  for (double p : coherence.transitions) v.push_back(p);
  return out;
}

}  // namespace essay

// grammar.hpp
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
// Declarative token-pattern grammar checker: rule file parsing, matching,
// error density/coverage and the suggestion-application pass used before
// semantic indexing.

#ifndef ESSAY_GRAMMAR_HPP
#define ESSAY_GRAMMAR_HPP

#include <array>
#include <cstddef>
#include <memory>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "essay/text.hpp"

namespace essay {

// The seven buckets. Fixed and exhaustive.
enum class RuleCategory : int {
  major = 0,
  capitalization,
  typography,
  style,
  replacement,
  punctuation,
  miscellaneous,
};
constexpr int kCategoryCount = 7;

const char* category_name(RuleCategory c);
std::optional<RuleCategory> category_from_name(const std::string& name);

// Per-category severity weights for the weighted density.
struct SeverityProfile {
  std::array<double, kCategoryCount> weights;

  // major 2.0, capitalization 0.75, typography 1.0, style 0.5,
  // replacement 1.0, punctuation 0.75, miscellaneous 0.5
  static SeverityProfile defaults();

  double weight(RuleCategory c) const { return weights[static_cast<int>(c)]; }
};

// One token constraint of a rule pattern. All present constraints must hold.
struct TokenMatcher {
  std::optional<std::string> surface;     // exact, case-sensitive
  std::optional<std::string> normalized;  // lowercase compare
  std::optional<std::string> regex_text;  // full match against surface
  std::shared_ptr<const std::regex> regex;
  std::optional<WordClass> word_class;
  // Whitespace run directly before this token: any width, none (tokens
  // touch), space (>= 1), wide (>= 2, no newline).
  enum class Gap { any, none, space, wide } gap = Gap::any;
  std::optional<std::size_t> same_as;  // 1-based earlier matcher: equal normalized forms
};

struct GrammarRule {
  std::string id;
  RuleCategory category = RuleCategory::miscellaneous;
  bool anchor_sentence_start = false;
  std::vector<TokenMatcher> pattern;
  std::optional<std::string> suggestion_template;  // "$1".."$n" expand to matched surfaces
  std::string message;
};

struct GrammarFinding {
  std::string rule_id;
  RuleCategory category = RuleCategory::miscellaneous;
  std::size_t first_token = 0;  // inclusive token-index span, one sentence
  std::size_t last_token = 0;
  std::string message;
  std::optional<std::string> suggestion;  // rendered replacement for the span
};

// Parses the rule DSL (see data/rules.grammar and the README for the
// format). Syntax errors report line and column; duplicate ids and unknown
// categories are rejected.
std::vector<GrammarRule> parse_rules(const std::string& path);
std::vector<GrammarRule> parse_rules_text(const std::string& text, const std::string& origin);

// Inverse of the parser, usable for round-trip checks.
std::string serialize_rules(const std::vector<GrammarRule>& rules);

// All matches of all rules. Per rule: leftmost scan, non-overlapping,
// within one sentence. Across rules everything is kept. Output is ordered
// by (span start, rule id).
std::vector<GrammarFinding> check_grammar(const Document& doc,
                                          const std::vector<GrammarRule>& rules);

// errors per 100 words; weighted mode sums category severity weights.
double grammar_error_density(const std::vector<GrammarFinding>& findings, const Document& doc,
                             bool weighted, const SeverityProfile& profile);

enum class CoverageGranularity { bucket, rule };

// distinct categories (or rule ids) per 100 words.
double grammar_error_coverage(const std::vector<GrammarFinding>& findings, const Document& doc,
                              CoverageGranularity granularity = CoverageGranularity::bucket);

// Applies suggestions left to right; on overlap the earliest span wins.
std::string apply_corrections(const Document& doc, const std::vector<GrammarFinding>& findings);

}  // namespace essay

#endif  // ESSAY_GRAMMAR_HPP

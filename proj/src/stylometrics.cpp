// stylometrics.cpp
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

#include "essay/stylometrics.hpp"

#include "essay/error.hpp"

namespace essay {

double flesch_kincaid_grade(const Document& doc) {
  const double wc = static_cast<double>(doc.word_count());
  const double sc = static_cast<double>(doc.sentence_count());
  if (wc < 1.0) throw Error("stylometrics", "readability undefined for a zero-word document");
  if (sc < 1.0) throw Error("stylometrics", "readability undefined without sentences");
  const double syc = static_cast<double>(doc.syllable_count());
  return 0.39 * (wc / sc) + 11.8 * (syc / wc) - 15.59;
}

double lexical_density(const Document& doc, const WordClassLexicon& lexicon) {
  long total = 0;
  long lexical = 0;
  for (const Token& t : doc.tokens) {
    if (t.kind != TokenKind::word) continue;
    ++total;
    WordClass wc = t.word_class == WordClass::unknown ? classify_word_class(t, lexicon)
                                                      : t.word_class;
    if (wc == WordClass::lexical) ++lexical;
  }
  if (total == 0) throw Error("stylometrics", "lexical density undefined for a zero-word document");
  return 100.0 * static_cast<double>(lexical) / static_cast<double>(total);
}

}  // namespace essay

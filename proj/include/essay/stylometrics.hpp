// stylometrics.hpp
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

#ifndef ESSAY_STYLOMETRICS_HPP
#define ESSAY_STYLOMETRICS_HPP

#include "essay/text.hpp"

namespace essay {

// 0.39 * words/sentence + 11.8 * syllables/word - 15.59. May be negative.
double flesch_kincaid_grade(const Document& doc);

// 100 * lexical word tokens / word tokens, in [0, 100].
double lexical_density(const Document& doc, const WordClassLexicon& lexicon);

}  // namespace essay

#endif  // ESSAY_STYLOMETRICS_HPP

// text.hpp
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
// Tokenization, sentence segmentation, syllable counting and word-class
// tagging. Every downstream feature consumes the Document built here.

#ifndef ESSAY_TEXT_HPP
#define ESSAY_TEXT_HPP

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace essay {

enum class TokenKind { word, number, punctuation };

enum class WordClass { lexical, grammatical, unknown };

struct Token {
  std::string surface;
  std::string normalized;  // lowercased surface (ASCII fold)
  std::size_t byte_start = 0;
  std::size_t byte_end = 0;
  TokenKind kind = TokenKind::word;
  int syllables = 0;  // >= 1 for word tokens, 0 otherwise
  WordClass word_class = WordClass::unknown;
};

// Inclusive token-index range of one sentence.
struct SentenceSpan {
  std::size_t first_token = 0;
  std::size_t last_token = 0;
};

// Closed-class stoplist plus explicit per-word overrides. "verb" entries in
// the lexicon file mark open-class verbs for the entity-grid role heuristic;
// they classify as lexical.
struct WordClassLexicon {
  std::set<std::string> closed_class;
  std::map<std::string, WordClass> overrides;
  std::set<std::string> verbs;
  std::map<std::string, int> syllable_overrides;

  bool is_verb(const std::string& normalized) const {
    return verbs.count(normalized) != 0;
  }
};

struct AbbreviationSet {
  // Lowercased abbreviations including the trailing period, e.g. "mr.".
  std::set<std::string> entries;

  bool contains(std::string_view word_before_period) const;
};

struct Document {
  std::string source;
  std::vector<Token> tokens;
  std::vector<SentenceSpan> sentences;

  std::size_t word_count() const;
  std::size_t sentence_count() const { return sentences.size(); }
  long syllable_count() const;
  // Sentence index for a token, or npos for none (cannot happen for tokens
  // of a segmented document).
  std::size_t sentence_of(std::size_t token_index) const;
};

// Words are maximal runs of letters with internal apostrophes/hyphens
// ("isn't", "co-operate"); numbers are maximal digit runs; any other
// non-whitespace byte is a single punctuation token. Bytes >= 0x80 are
// treated as letters so UTF-8 words survive intact.
std::vector<Token> tokenize(std::string_view text);

// Sentence boundaries at '.', '!' and '?' tokens; a '.' directly after an
// abbreviation does not terminate. Runs of terminators ("...", "?!") close
// with their sentence. Trailing tokens form a final sentence.
std::vector<SentenceSpan> segment_sentences(const std::vector<Token>& tokens,
                                            const AbbreviationSet& abbrevs);

// Heuristic: count vowel groups (a,e,i,o,u,y); a trailing 'e' is silent when
// the word has another vowel group and does not end in "le". Never below 1.
int count_syllables(std::string_view word);

WordClass classify_word_class(const Token& token, const WordClassLexicon& lexicon);

// Full analysis: tokenize, segment, fill per-token syllables (lexicon
// overrides win over the heuristic) and word classes.
Document make_document(std::string text, const WordClassLexicon& lexicon,
                       const AbbreviationSet& abbrevs);

// Lexicon file: "word<TAB>class" with class in {grammatical, lexical, verb},
// optional third column = syllable override.
WordClassLexicon load_lexicon(const std::string& path);

// One abbreviation per line, trailing period included.
AbbreviationSet load_abbreviations(const std::string& path);

std::string to_lower(std::string_view s);

}  // namespace essay

#endif  // ESSAY_TEXT_HPP

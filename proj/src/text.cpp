// text.cpp
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

#include "essay/text.hpp"

#include <fstream>
#include <sstream>

#include "essay/error.hpp"

namespace essay {

namespace {

bool is_ascii_letter(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

// Non-ASCII bytes count as letters; see header.
bool is_letterish(unsigned char c) { return is_ascii_letter(c) || c >= 0x80; }

bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }

bool is_space(unsigned char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_vowel(char c) {
  return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u' || c == 'y';
}

bool is_terminator(const Token& t) {
  return t.kind == TokenKind::punctuation &&
         (t.surface == "." || t.surface == "!" || t.surface == "?");
}

}  // namespace

std::string to_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

bool AbbreviationSet::contains(std::string_view word_before_period) const {
  std::string key = to_lower(word_before_period);
  key.push_back('.');
  return entries.count(key) != 0;
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (is_space(c)) {
      ++i;
      continue;
    }
    Token tok;
    tok.byte_start = i;
    if (is_letterish(c)) {
      // Internal ' and - stay in the word only when a letter follows.
      std::size_t j = i + 1;
      while (j < n) {
        unsigned char d = static_cast<unsigned char>(text[j]);
        if (is_letterish(d)) {
          ++j;
        } else if ((d == '\'' || d == '-') && j + 1 < n &&
                   is_letterish(static_cast<unsigned char>(text[j + 1]))) {
          j += 2;
        } else {
          break;
        }
      }
      tok.byte_end = j;
      tok.kind = TokenKind::word;
      i = j;
    } else if (is_digit(c)) {
      std::size_t j = i + 1;
      while (j < n && is_digit(static_cast<unsigned char>(text[j]))) ++j;
      tok.byte_end = j;
      tok.kind = TokenKind::number;
      i = j;
    } else {
      tok.byte_end = i + 1;
      tok.kind = TokenKind::punctuation;
      i += 1;
    }
    tok.surface = std::string(text.substr(tok.byte_start, tok.byte_end - tok.byte_start));
    tok.normalized = to_lower(tok.surface);
    if (tok.kind == TokenKind::word) tok.syllables = count_syllables(tok.surface);
    tokens.push_back(std::move(tok));
  }
  return tokens;
}

std::vector<SentenceSpan> segment_sentences(const std::vector<Token>& tokens,
                                            const AbbreviationSet& abbrevs) {
  std::vector<SentenceSpan> sentences;
  if (tokens.empty()) return sentences;

  std::size_t first = 0;
  std::size_t i = 0;
  while (i < tokens.size()) {
    bool boundary = false;
    if (is_terminator(tokens[i])) {
      if (tokens[i].surface == "." && i > 0 && tokens[i - 1].kind == TokenKind::word &&
          tokens[i - 1].byte_end == tokens[i].byte_start &&
          abbrevs.contains(tokens[i - 1].surface)) {
        boundary = false;  // "Mr." and friends
      } else {
        boundary = true;
      }
    }
    if (boundary) {
      // Absorb a terminator run ("...", "?!") into the closing sentence.
      while (i + 1 < tokens.size() && is_terminator(tokens[i + 1])) ++i;
      sentences.push_back({first, i});
      first = i + 1;
    }
    ++i;
  }
  if (first < tokens.size()) sentences.push_back({first, tokens.size() - 1});
  return sentences;
}

int count_syllables(std::string_view word) {
  std::string w = to_lower(word);
  int groups = 0;
  bool in_group = false;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (is_vowel(w[i])) {
      if (!in_group) {
        ++groups;
        in_group = true;
      }
    } else {
      in_group = false;
    }
  }
  // Silent trailing 'e' unless it is the only vowel group or the word ends
  // in "le" preceded by a consonant ("table").
  if (w.size() >= 2 && w.back() == 'e' && !is_vowel(w[w.size() - 2])) {
    bool ends_le = w.size() >= 3 && w[w.size() - 2] == 'l' && !is_vowel(w[w.size() - 3]);
    if (groups > 1 && !ends_le) --groups;
  }
  return groups < 1 ? 1 : groups;
}

WordClass classify_word_class(const Token& token, const WordClassLexicon& lexicon) {
  auto it = lexicon.overrides.find(token.normalized);
  if (it != lexicon.overrides.end()) return it->second;
  if (lexicon.closed_class.count(token.normalized)) return WordClass::grammatical;
  return WordClass::lexical;
}

std::size_t Document::word_count() const {
  std::size_t n = 0;
  for (const Token& t : tokens)
    if (t.kind == TokenKind::word) ++n;
  return n;
}

long Document::syllable_count() const {
  long n = 0;
  for (const Token& t : tokens)
    if (t.kind == TokenKind::word) n += t.syllables;
  return n;
}

std::size_t Document::sentence_of(std::size_t token_index) const {
  for (std::size_t s = 0; s < sentences.size(); ++s) {
    if (token_index >= sentences[s].first_token && token_index <= sentences[s].last_token)
      return s;
  }
  return static_cast<std::size_t>(-1);
}

Document make_document(std::string text, const WordClassLexicon& lexicon,
                       const AbbreviationSet& abbrevs) {
  Document doc;
  doc.source = std::move(text);
  doc.tokens = tokenize(doc.source);
  doc.sentences = segment_sentences(doc.tokens, abbrevs);
  for (Token& t : doc.tokens) {
    if (t.kind != TokenKind::word) continue;
    auto syl = lexicon.syllable_overrides.find(t.normalized);
    if (syl != lexicon.syllable_overrides.end()) t.syllables = syl->second;
    t.word_class = classify_word_class(t, lexicon);
  }
  return doc;
}

WordClassLexicon load_lexicon(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("lexicon", "cannot open lexicon file: " + path);
  WordClassLexicon lex;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string word, cls, syl;
    ss >> word >> cls;
    if (word.empty() || cls.empty())
      throw Error("lexicon", path + ":" + std::to_string(lineno) + ": expected 'word<TAB>class'");
    word = to_lower(word);
    if (cls == "grammatical") {
      lex.closed_class.insert(word);
    } else if (cls == "lexical") {
      lex.overrides[word] = WordClass::lexical;
    } else if (cls == "verb") {
      lex.overrides[word] = WordClass::lexical;
      lex.verbs.insert(word);
    } else {
      throw Error("lexicon", path + ":" + std::to_string(lineno) + ": unknown class '" + cls + "'");
    }
    if (ss >> syl) {
      try {
        int v = std::stoi(syl);
        if (v < 1) throw std::invalid_argument("nonpositive");
        lex.syllable_overrides[word] = v;
      } catch (const std::exception&) {
        throw Error("lexicon",
                    path + ":" + std::to_string(lineno) + ": bad syllable override '" + syl + "'");
      }
    }
  }
  return lex;
}

AbbreviationSet load_abbreviations(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("abbreviations", "cannot open abbreviation file: " + path);
  AbbreviationSet set;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    set.entries.insert(to_lower(line));
  }
  return set;
}

}  // namespace essay

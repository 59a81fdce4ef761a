// synthetic.cpp
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

#include "synthetic.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

#include "essay/rng.hpp"

namespace essay::synth {

namespace {

const std::vector<std::vector<std::string>>& topic_nouns() {
  static const std::vector<std::vector<std::string>> pools = {
      {"climate", "weather", "temperature", "carbon", "emission", "glacier", "drought",
       "flood", "rainfall", "ocean", "forest", "pollution", "energy", "planet", "storm",
       "season", "coast", "harvest", "river", "wildlife"},
      {"leader", "leadership", "vision", "courage", "integrity", "decision", "authority",
       "responsibility", "team", "respect", "confidence", "mentor", "strategy", "guidance",
       "character", "honesty", "trust", "morale", "discipline", "example"},
      {"motivation", "salary", "reward", "purpose", "ambition", "career", "growth",
       "training", "recognition", "effort", "goal", "passion", "success", "workplace",
       "bonus", "praise", "satisfaction", "habit", "focus", "routine"},
  };
  return pools;
}

const std::vector<std::string>& simple_adjectives() {
  static const std::vector<std::string> v = {"good", "bad",  "big",  "small", "clear",
                                             "strong", "weak", "slow", "fast",  "plain"};
  return v;
}

const std::vector<std::string>& complex_adjectives() {
  static const std::vector<std::string> v = {"significant", "considerable", "remarkable",
                                             "fundamental", "essential",    "important",
                                             "powerful",    "valuable",     "necessary",
                                             "effective"};
  return v;
}

const std::vector<std::string>& simple_adverbs() {
  static const std::vector<std::string> v = {"soon", "often", "early"};
  return v;
}

const std::vector<std::string>& complex_adverbs() {
  static const std::vector<std::string> v = {"significantly", "carefully", "effectively",
                                             "gradually", "certainly"};
  return v;
}

const std::vector<std::string>& content_verbs() {
  static const std::vector<std::string> v = {"shows",    "causes",  "improves", "creates",
                                             "supports", "requires", "changes",  "brings",
                                             "explains", "reflects", "shapes",   "builds",
                                             "raises",   "forms",    "offers"};
  return v;
}

const std::vector<std::string>& filler_words() {
  static const std::vector<std::string> v = {"the", "of", "in", "and", "to", "that", "it",
                                             "is", "was", "are", "with", "for", "on", "as",
                                             "this", "so"};
  return v;
}

// Words appearing only in injected agreement fragments.
const std::vector<std::string>& fragment_words() {
  static const std::vector<std::string> v = {"he", "they", "we", "sure", "ready", "early",
                                             "affect"};
  return v;
}

std::set<std::string> all_clean_words() {
  std::set<std::string> words;
  for (const auto& pool : topic_nouns()) words.insert(pool.begin(), pool.end());
  auto add = [&](const std::vector<std::string>& v) { words.insert(v.begin(), v.end()); };
  add(simple_adjectives());
  add(complex_adjectives());
  add(simple_adverbs());
  add(complex_adverbs());
  add(content_verbs());
  add(filler_words());
  add(fragment_words());
  return words;
}

std::set<std::string> content_word_set() {
  std::set<std::string> words;
  for (const auto& pool : topic_nouns()) words.insert(pool.begin(), pool.end());
  auto add = [&](const std::vector<std::string>& v) { words.insert(v.begin(), v.end()); };
  add(simple_adjectives());
  add(complex_adjectives());
  add(simple_adverbs());
  add(complex_adverbs());
  add(content_verbs());
  return words;
}

template <typename T>
const T& pick(const std::vector<T>& v, Rng& rng) {
  return v[rng.below(v.size())];
}

using Sentence = std::vector<std::string>;  // word tokens; "," is a comma token

Sentence make_sentence(Rng& rng, double q, const std::vector<std::string>& nouns) {
  Sentence s;
  auto adj = [&]() -> const std::string& {
    return rng.next_unit() < 0.2 + 0.6 * q ? pick(complex_adjectives(), rng)
                                           : pick(simple_adjectives(), rng);
  };
  s.push_back("The");
  if (rng.next_unit() < 0.25 + 0.5 * q) s.push_back(adj());
  s.push_back(pick(nouns, rng));
  s.push_back(pick(content_verbs(), rng));
  if (rng.next_unit() < 0.2 + 0.5 * q)
    s.push_back(rng.next_unit() < q ? pick(complex_adverbs(), rng)
                                    : pick(simple_adverbs(), rng));
  s.push_back("the");
  if (rng.next_unit() < 0.2 + 0.6 * q) s.push_back(adj());
  s.push_back(pick(nouns, rng));
  if (rng.next_unit() < 0.3 + 0.5 * q) {
    s.push_back("with");
    s.push_back(adj());
    s.push_back(pick(nouns, rng));
  }
  if (rng.next_unit() < 0.5) {
    s.push_back(",");
    s.push_back("and");
    s.push_back("the");
    s.push_back(pick(nouns, rng));
    s.push_back(pick(content_verbs(), rng));
    s.push_back("the");
    s.push_back(pick(nouns, rng));
  }
  if (rng.next_unit() < 0.6 * (1.0 - q)) {
    s.push_back("and");
    s.push_back("it");
    s.push_back("was");
    s.push_back("so");
  }
  return s;
}

std::size_t word_count(const std::vector<Sentence>& sentences) {
  std::size_t n = 0;
  for (const Sentence& s : sentences)
    for (const std::string& t : s)
      if (t != ",") ++n;
  return n;
}

void inject_grammar(std::vector<Sentence>& sentences, std::size_t count, Rng& rng) {
  static const std::vector<Sentence> fragments = {
      {"He", "are", "sure"}, {"They", "is", "ready"}, {"We", "was", "early"}};
  for (std::size_t k = 0; k < count; ++k) {
    switch (k % 5) {
      case 0: {  // major: agreement fragment sentence
        std::size_t at = rng.below(sentences.size() + 1);
        sentences.insert(sentences.begin() + static_cast<std::ptrdiff_t>(at),
                         fragments[(k / 5) % fragments.size()]);
        break;
      }
      case 1: {  // capitalization: lowercase a sentence start
        std::size_t start = rng.below(sentences.size());
        for (std::size_t j = 0; j < sentences.size(); ++j) {
          Sentence& s = sentences[(start + j) % sentences.size()];
          if (!s.empty() && s[0][0] >= 'A' && s[0][0] <= 'Z') {
            s[0][0] = static_cast<char>(s[0][0] - 'A' + 'a');
            break;
          }
        }
        break;
      }
      case 2: {  // miscellaneous: doubled word
        Sentence& s = sentences[rng.below(sentences.size())];
        std::size_t at = rng.below(s.size());
        for (std::size_t j = 0; j < s.size(); ++j) {
          std::size_t p = (at + j) % s.size();
          if (s[p] != ",") {
            s.insert(s.begin() + static_cast<std::ptrdiff_t>(p) + 1, s[p]);
            break;
          }
        }
        break;
      }
      case 3: {  // punctuation: doubled comma
        Sentence& s = sentences[rng.below(sentences.size())];
        std::size_t at = 1 + rng.below(s.size() - 1);
        s.insert(s.begin() + static_cast<std::ptrdiff_t>(at), ",");
        s.insert(s.begin() + static_cast<std::ptrdiff_t>(at), ",");
        break;
      }
      case 4: {  // replacement: "the affect"
        Sentence& s = sentences[rng.below(sentences.size())];
        std::size_t at = 1 + rng.below(s.size() - 1);
        s.insert(s.begin() + static_cast<std::ptrdiff_t>(at), "affect");
        s.insert(s.begin() + static_cast<std::ptrdiff_t>(at), "the");
        break;
      }
    }
  }
}

void inject_spelling(std::vector<Sentence>& sentences, std::size_t count, Rng& rng) {
  static const std::set<std::string> content = content_word_set();
  static const std::set<std::string> clean = all_clean_words();
  std::size_t done = 0;
  std::size_t attempts = 0;
  while (done < count && attempts < count * 20 + 50) {
    ++attempts;
    Sentence& s = sentences[rng.below(sentences.size())];
    std::size_t p = rng.below(s.size());
    std::string lower = s[p];
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower.size() < 4 || !content.count(lower)) continue;
    std::swap(lower[lower.size() - 1], lower[lower.size() - 2]);
    if (clean.count(lower)) lower += "x";  // avoid colliding with a real word
    s[p] = lower;
    ++done;
  }
}

std::string render(const std::vector<Sentence>& sentences) {
  std::string out;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    if (i > 0) out.push_back(' ');
    const Sentence& s = sentences[i];
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (s[j] == ",") {
        out.push_back(',');
      } else {
        if (j > 0) out.push_back(' ');
        out += s[j];
      }
    }
    out.push_back('.');
  }
  return out;
}

}  // namespace

const std::vector<std::string>& topics() {
  static const std::vector<std::string> v = {"climate", "leadership", "motivation"};
  return v;
}

Corpus generate(const Options& opts) {
  Corpus corpus;
  for (std::size_t idx = 0; idx < opts.essay_count; ++idx) {
    Rng rng(mix_seed(opts.seed, idx));
    double q = rng.next_unit();
    std::size_t topic = idx % topics().size();
    std::size_t sentence_count =
        opts.min_sentences + rng.below(opts.max_sentences - opts.min_sentences + 1);

    std::vector<Sentence> sentences;
    sentences.reserve(sentence_count);
    for (std::size_t s = 0; s < sentence_count; ++s)
      sentences.push_back(make_sentence(rng, q, topic_nouns()[topic]));

    std::size_t wc = word_count(sentences);
    auto scaled = [&](double rate) {
      return static_cast<std::size_t>(
          std::llround(static_cast<double>(wc) * (1.0 - q) * rate / 100.0));
    };
    inject_grammar(sentences, scaled(opts.grammar_rate), rng);
    inject_spelling(sentences, scaled(opts.spelling_rate), rng);

    double true_score = 1.0 + 9.0 * q;
    EssayRecord rec;
    char id[32];
    std::snprintf(id, sizeof(id), "syn%04zu", idx);
    rec.essay_id = id;
    rec.topic_id = topics()[topic];
    rec.text = render(sentences);
    int lo = static_cast<int>(std::floor(true_score));
    int hi = static_cast<int>(std::ceil(true_score));
    rec.rater_scores = {std::clamp(lo, 1, 10), std::clamp(hi, 1, 10)};
    corpus.records.push_back(std::move(rec));
    corpus.quality.push_back(q);
    corpus.true_score.push_back(true_score);
  }
  return corpus;
}

std::string dictionary_text() {
  std::ostringstream out;
  for (const std::string& w : all_clean_words()) out << w << "\n";
  return out.str();
}

std::string lexicon_text() {
  std::ostringstream out;
  for (const std::string& w : filler_words()) out << w << "\tgrammatical\n";
  for (const char* w : {"he", "they", "we"}) out << w << "\tgrammatical\n";
  for (const std::string& w : content_verbs()) out << w << "\tverb\n";
  return out.str();
}

std::string monotonic_essay(std::size_t sentence_count) {
  const auto& nouns = topic_nouns()[0];
  const auto& adjs = simple_adjectives();
  std::vector<Sentence> sentences;
  for (std::size_t i = 0; i < sentence_count; ++i) {
    Sentence s = {"He", "is", "sure", "that", "the", nouns[i % nouns.size()],
                  "is", adjs[i % adjs.size()]};
    sentences.push_back(std::move(s));
  }
  return render(sentences);
}

std::string with_agreement_errors(const std::string& text, int count) {
  std::string out = text;
  std::size_t pos = 0;
  for (int k = 0; k < count; ++k) {
    pos = out.find("He is", pos);
    if (pos == std::string::npos) break;
    out.replace(pos, 5, "He are");
    pos += 6;
  }
  return out;
}

}  // namespace essay::synth

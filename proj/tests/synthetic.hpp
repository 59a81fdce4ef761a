// synthetic.hpp
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
// Deterministic synthetic essay corpus with a single latent quality level
// per essay driving grammar-error, misspelling, vocabulary-richness and
// sentence-complexity injection. Rubric scores are a fixed noiseless
// monotone function of that level. Test-only.

#ifndef ESSAY_TESTS_SYNTHETIC_HPP
#define ESSAY_TESTS_SYNTHETIC_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "essay/corpus.hpp"

namespace essay::synth {

struct Options {
  std::size_t essay_count = 300;
  std::uint64_t seed = 20240811;
  double grammar_rate = 8.0;   // injected grammar errors per 100 words at quality 0
  double spelling_rate = 6.0;  // injected misspellings per 100 words at quality 0
  std::size_t min_sentences = 12;
  std::size_t max_sentences = 17;
};

struct Corpus {
  std::vector<essay::EssayRecord> records;
  std::vector<double> quality;     // latent level in [0,1], one per record
  std::vector<double> true_score;  // 1 + 9 * quality
};

Corpus generate(const Options& opts);

const std::vector<std::string>& topics();

// Resource file bodies matching the generator vocabulary.
std::string dictionary_text();
std::string lexicon_text();

// Fixed essay whose sentences each contain one "He is" site; swapping the
// first `count` sites to "He are" adds exactly one agreement finding each
// and changes no other feature.
std::string monotonic_essay(std::size_t sentence_count);
std::string with_agreement_errors(const std::string& text, int count);

}  // namespace essay::synth

#endif  // ESSAY_TESTS_SYNTHETIC_HPP

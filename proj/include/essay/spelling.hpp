// spelling.hpp
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
// Dictionary-based misspelling detection with an adaptive whitelist,
// damped repeated-error penalties, and the tally mechanism that surfaces
// frequent unknown tokens for human review.

#ifndef ESSAY_SPELLING_HPP
#define ESSAY_SPELLING_HPP

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "essay/text.hpp"

namespace essay {

struct Dictionary {
  std::set<std::string> words;  // lowercase

  bool contains(const std::string& normalized) const { return words.count(normalized) != 0; }
};

Dictionary load_dictionary(const std::string& path);

// Unknown-token tallies accumulate across essays; tokens whose cumulative
// count reaches the threshold surface in `pending` until a human accepts or
// rejects them.
struct WhitelistStore {
  int version = 1;
  int threshold = 5;
  std::set<std::string> accepted;
  std::set<std::string> pending;
  std::map<std::string, long> tallies;
};

WhitelistStore load_whitelist(const std::string& path);
// Write-temp-then-rename so a concurrent reader never sees a torn file.
void save_whitelist(const std::string& path, const WhitelistStore& wl);

struct SpellingFinding {
  std::size_t token_index = 0;  // first occurrence
  std::string surface;          // of the first occurrence
  std::string normalized;
  int frequency_in_essay = 0;
  double quantum = 0.0;  // error_quantum(frequency_in_essay)
  // Capitalized somewhere mid-sentence; a hint for whitelist curation.
  bool proper_noun_candidate = false;
};

enum class DampingKind { harmonic, logarithmic };

// Damped penalty of one misspelling repeated f times. Harmonic (default):
// sum_{i=1..f} 1/i. Logarithmic: 1 + ln(f). Both concave increasing.
double error_quantum(int frequency, DampingKind damping = DampingKind::harmonic);

// One finding per distinct misspelled normalized form, in order of first
// occurrence. A word is misspelled iff it is in neither the dictionary nor
// the accepted whitelist.
std::vector<SpellingFinding> check_spelling(const Document& doc, const Dictionary& dict,
                                            const WhitelistStore& wl,
                                            DampingKind damping = DampingKind::harmonic);

// 100 * sum of quanta / word count.
double spelling_error_density(const std::vector<SpellingFinding>& findings, const Document& doc);

// 100 * distinct misspelled forms / word count.
double spelling_error_coverage(const std::vector<SpellingFinding>& findings, const Document& doc);

// Adds per-essay frequencies to the cumulative tallies; tokens at or past
// the threshold move to pending.
void record_unknowns(const std::vector<SpellingFinding>& findings, WhitelistStore& wl);

enum class WhitelistDecision { accept, reject };

// accept: token joins the accepted set and leaves the tally stream.
// reject: token leaves pending and its tally restarts from zero.
void resolve_pending(WhitelistStore& wl, const std::string& token, WhitelistDecision decision);

}  // namespace essay

#endif  // ESSAY_SPELLING_HPP

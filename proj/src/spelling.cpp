// spelling.cpp
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

#include "essay/spelling.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "essay/error.hpp"

namespace essay {

Dictionary load_dictionary(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("dictionary", "cannot open dictionary file: " + path);
  Dictionary dict;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    dict.words.insert(to_lower(line));
  }
  if (dict.words.empty()) throw Error("dictionary", "dictionary is empty: " + path);
  return dict;
}

WhitelistStore load_whitelist(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("whitelist", "cannot open whitelist store: " + path);
  nlohmann::json obj;
  try {
    in >> obj;
  } catch (const nlohmann::json::exception& e) {
    throw Error("whitelist", path + ": invalid JSON: " + e.what());
  }
  WhitelistStore wl;
  try {
    wl.version = obj.at("version").get<int>();
    if (wl.version != 1)
      throw Error("whitelist", path + ": unsupported store version " + std::to_string(wl.version));
    wl.threshold = obj.at("threshold").get<int>();
    if (wl.threshold < 1) throw Error("whitelist", path + ": threshold must be positive");
    for (const auto& t : obj.at("accepted")) wl.accepted.insert(t.get<std::string>());
    for (const auto& t : obj.at("pending")) wl.pending.insert(t.get<std::string>());
    for (const auto& [k, v] : obj.at("tallies").items()) wl.tallies[k] = v.get<long>();
  } catch (const nlohmann::json::exception& e) {
    throw Error("whitelist", path + ": missing or bad field: " + e.what());
  }
  return wl;
}

void save_whitelist(const std::string& path, const WhitelistStore& wl) {
  nlohmann::json obj;
  obj["version"] = wl.version;
  obj["threshold"] = wl.threshold;
  obj["accepted"] = wl.accepted;
  obj["pending"] = wl.pending;
  nlohmann::json tallies = nlohmann::json::object();
  for (const auto& [k, v] : wl.tallies) tallies[k] = v;
  obj["tallies"] = tallies;

  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("whitelist", "cannot write whitelist store: " + tmp);
    out << obj.dump(2) << '\n';
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw Error("whitelist", "cannot replace whitelist store: " + path);
}

double error_quantum(int frequency, DampingKind damping) {
  if (frequency < 1) throw Error("spelling", "error quantum undefined for frequency < 1");
  if (damping == DampingKind::logarithmic) return 1.0 + std::log(static_cast<double>(frequency));
  double sum = 0.0;
  for (int i = 1; i <= frequency; ++i) sum += 1.0 / static_cast<double>(i);
  return sum;
}

std::vector<SpellingFinding> check_spelling(const Document& doc, const Dictionary& dict,
                                            const WhitelistStore& wl, DampingKind damping) {
  std::vector<SpellingFinding> findings;
  std::map<std::string, std::size_t> by_form;  // normalized -> index into findings
  for (std::size_t i = 0; i < doc.tokens.size(); ++i) {
    const Token& t = doc.tokens[i];
    if (t.kind != TokenKind::word) continue;
    if (dict.contains(t.normalized) || wl.accepted.count(t.normalized)) continue;

    bool capitalized = !t.surface.empty() && t.surface[0] >= 'A' && t.surface[0] <= 'Z';
    bool sentence_initial = false;
    std::size_t s = doc.sentence_of(i);
    if (s != static_cast<std::size_t>(-1)) {
      // First word token of the sentence, not merely the first token.
      for (std::size_t j = doc.sentences[s].first_token; j <= doc.sentences[s].last_token; ++j) {
        if (doc.tokens[j].kind == TokenKind::word) {
          sentence_initial = (j == i);
          break;
        }
      }
    }
    bool mid_sentence_cap = capitalized && !sentence_initial;

    auto it = by_form.find(t.normalized);
    if (it == by_form.end()) {
      SpellingFinding f;
      f.token_index = i;
      f.surface = t.surface;
      f.normalized = t.normalized;
      f.frequency_in_essay = 1;
      f.proper_noun_candidate = mid_sentence_cap;
      by_form.emplace(t.normalized, findings.size());
      findings.push_back(std::move(f));
    } else {
      SpellingFinding& f = findings[it->second];
      f.frequency_in_essay += 1;
      f.proper_noun_candidate = f.proper_noun_candidate || mid_sentence_cap;
    }
  }
  for (SpellingFinding& f : findings) f.quantum = error_quantum(f.frequency_in_essay, damping);
  return findings;
}

double spelling_error_density(const std::vector<SpellingFinding>& findings, const Document& doc) {
  const std::size_t wc = doc.word_count();
  if (wc == 0) throw Error("spelling", "error density undefined for a zero-word document");
  double sum = 0.0;
  for (const SpellingFinding& f : findings) sum += f.quantum;
  return 100.0 * sum / static_cast<double>(wc);
}

double spelling_error_coverage(const std::vector<SpellingFinding>& findings, const Document& doc) {
  const std::size_t wc = doc.word_count();
  if (wc == 0) throw Error("spelling", "error coverage undefined for a zero-word document");
  return 100.0 * static_cast<double>(findings.size()) / static_cast<double>(wc);
}

void record_unknowns(const std::vector<SpellingFinding>& findings, WhitelistStore& wl) {
  for (const SpellingFinding& f : findings) {
    if (wl.accepted.count(f.normalized)) continue;
    long& tally = wl.tallies[f.normalized];
    tally += f.frequency_in_essay;
    if (tally >= wl.threshold) wl.pending.insert(f.normalized);
  }
}

void resolve_pending(WhitelistStore& wl, const std::string& token, WhitelistDecision decision) {
  std::string key = to_lower(token);
  if (!wl.pending.count(key))
    throw Error("whitelist", "token '" + key + "' is not pending review");
  wl.pending.erase(key);
  if (decision == WhitelistDecision::accept) {
    wl.accepted.insert(key);
    wl.tallies.erase(key);
  } else {
    wl.tallies[key] = 0;
  }
}

}  // namespace essay

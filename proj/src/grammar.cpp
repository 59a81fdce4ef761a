// grammar.cpp
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

#include "essay/grammar.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "essay/error.hpp"

namespace essay {

const char* category_name(RuleCategory c) {
  switch (c) {
    case RuleCategory::major: return "major";
    case RuleCategory::capitalization: return "capitalization";
    case RuleCategory::typography: return "typography";
    case RuleCategory::style: return "style";
    case RuleCategory::replacement: return "replacement";
    case RuleCategory::punctuation: return "punctuation";
    case RuleCategory::miscellaneous: return "miscellaneous";
  }
  return "miscellaneous";
}

std::optional<RuleCategory> category_from_name(const std::string& name) {
  static const std::pair<const char*, RuleCategory> table[] = {
      {"major", RuleCategory::major},
      {"capitalization", RuleCategory::capitalization},
      {"typography", RuleCategory::typography},
      {"style", RuleCategory::style},
      {"replacement", RuleCategory::replacement},
      {"punctuation", RuleCategory::punctuation},
      {"miscellaneous", RuleCategory::miscellaneous},
  };
  for (const auto& [n, c] : table)
    if (name == n) return c;
  return std::nullopt;
}

SeverityProfile SeverityProfile::defaults() {
  SeverityProfile p{};
  p.weights[static_cast<int>(RuleCategory::major)] = 2.0;
  p.weights[static_cast<int>(RuleCategory::capitalization)] = 0.75;
  p.weights[static_cast<int>(RuleCategory::typography)] = 1.0;
  p.weights[static_cast<int>(RuleCategory::style)] = 0.5;
  p.weights[static_cast<int>(RuleCategory::replacement)] = 1.0;
  p.weights[static_cast<int>(RuleCategory::punctuation)] = 0.75;
  p.weights[static_cast<int>(RuleCategory::miscellaneous)] = 0.5;
  return p;
}

namespace {

struct ParseCursor {
  const std::string& origin;
  std::size_t line = 0;

  [[noreturn]] void fail(std::size_t col, const std::string& msg) const {
    throw Error("rules", origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
  }
};

// Splits "key=value" segments of a match line. Values may be "quoted",
// /regex-delimited/ or bare. Returns (key, value, column-of-key).
struct KeyValue {
  std::string key;
  std::string value;
  std::size_t col;
};

std::vector<KeyValue> split_key_values(const std::string& s, const ParseCursor& cur,
                                       std::size_t col_offset) {
  std::vector<KeyValue> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    if (i >= s.size()) break;
    std::size_t key_start = i;
    while (i < s.size() && s[i] != '=' && s[i] != ' ' && s[i] != '\t') ++i;
    if (i >= s.size() || s[i] != '=')
      cur.fail(col_offset + key_start + 1, "expected key=value, got '" + s.substr(key_start) + "'");
    KeyValue kv;
    kv.key = s.substr(key_start, i - key_start);
    kv.col = col_offset + key_start + 1;
    ++i;  // past '='
    if (i < s.size() && s[i] == '"') {
      std::size_t close = s.find('"', i + 1);
      if (close == std::string::npos) cur.fail(col_offset + i + 1, "unterminated quoted value");
      kv.value = s.substr(i + 1, close - i - 1);
      i = close + 1;
    } else if (i < s.size() && s[i] == '/') {
      std::size_t close = s.find('/', i + 1);
      if (close == std::string::npos) cur.fail(col_offset + i + 1, "unterminated /regex/ value");
      kv.value = s.substr(i + 1, close - i - 1);
      i = close + 1;
      kv.key += "/";  // marks regex-delimited form for the caller
    } else {
      std::size_t val_start = i;
      while (i < s.size() && s[i] != ' ' && s[i] != '\t') ++i;
      kv.value = s.substr(val_start, i - val_start);
    }
    out.push_back(std::move(kv));
  }
  return out;
}

TokenMatcher parse_matcher(const std::string& body, const ParseCursor& cur,
                           std::size_t col_offset, std::size_t matcher_index) {
  TokenMatcher m;
  for (const KeyValue& kv : split_key_values(body, cur, col_offset)) {
    if (kv.key == "surface") {
      m.surface = kv.value;
    } else if (kv.key == "normalized") {
      m.normalized = to_lower(kv.value);
    } else if (kv.key == "regex/" || kv.key == "regex") {
      m.regex_text = kv.value;
      try {
        m.regex = std::make_shared<const std::regex>(kv.value, std::regex::ECMAScript);
      } catch (const std::regex_error& e) {
        cur.fail(kv.col, std::string("bad regex: ") + e.what());
      }
    } else if (kv.key == "class") {
      if (kv.value == "grammatical") m.word_class = WordClass::grammatical;
      else if (kv.value == "lexical") m.word_class = WordClass::lexical;
      else cur.fail(kv.col, "class must be grammatical or lexical, got '" + kv.value + "'");
    } else if (kv.key == "gap") {
      if (kv.value == "none") m.gap = TokenMatcher::Gap::none;
      else if (kv.value == "space") m.gap = TokenMatcher::Gap::space;
      else if (kv.value == "wide") m.gap = TokenMatcher::Gap::wide;
      else cur.fail(kv.col, "gap must be none, space or wide, got '" + kv.value + "'");
    } else if (kv.key == "same_as") {
      std::size_t ref = 0;
      try {
        ref = std::stoul(kv.value);
      } catch (const std::exception&) {
        cur.fail(kv.col, "same_as needs a matcher index");
      }
      if (ref < 1 || ref > matcher_index)
        cur.fail(kv.col, "same_as must reference an earlier matcher (1.." +
                             std::to_string(matcher_index) + ")");
      m.same_as = ref;
    } else {
      cur.fail(kv.col, "unknown matcher key '" + kv.key + "'");
    }
  }
  return m;
}

// Highest $n referenced by a suggestion template, validating escapes.
std::size_t max_template_ref(const std::string& tmpl, const ParseCursor& cur) {
  std::size_t max_ref = 0;
  for (std::size_t i = 0; i < tmpl.size(); ++i) {
    if (tmpl[i] != '$') continue;
    if (i + 1 >= tmpl.size()) cur.fail(i + 1, "dangling '$' in suggestion template");
    if (tmpl[i + 1] == '$') {
      ++i;
      continue;
    }
    if (tmpl[i + 1] < '1' || tmpl[i + 1] > '9')
      cur.fail(i + 2, "suggestion template expects $1..$9 or $$");
    std::size_t j = i + 1;
    std::size_t ref = 0;
    while (j < tmpl.size() && tmpl[j] >= '0' && tmpl[j] <= '9') {
      ref = ref * 10 + static_cast<std::size_t>(tmpl[j] - '0');
      ++j;
    }
    max_ref = std::max(max_ref, ref);
    i = j - 1;
  }
  return max_ref;
}

std::string render_suggestion(const std::string& tmpl, const Document& doc, std::size_t first,
                              std::size_t count) {
  std::string out;
  for (std::size_t i = 0; i < tmpl.size(); ++i) {
    if (tmpl[i] != '$') {
      out.push_back(tmpl[i]);
      continue;
    }
    if (tmpl[i + 1] == '$') {
      out.push_back('$');
      ++i;
      continue;
    }
    std::size_t j = i + 1;
    std::size_t ref = 0;
    while (j < tmpl.size() && tmpl[j] >= '0' && tmpl[j] <= '9') {
      ref = ref * 10 + static_cast<std::size_t>(tmpl[j] - '0');
      ++j;
    }
    if (ref >= 1 && ref <= count) out += doc.tokens[first + ref - 1].surface;
    i = j - 1;
  }
  return out;
}

bool gap_satisfied(const Document& doc, std::size_t token_index, TokenMatcher::Gap gap) {
  if (gap == TokenMatcher::Gap::any) return true;
  std::size_t gap_len = 0;
  bool has_newline = false;
  if (token_index > 0) {
    std::size_t from = doc.tokens[token_index - 1].byte_end;
    std::size_t to = doc.tokens[token_index].byte_start;
    gap_len = to - from;
    for (std::size_t b = from; b < to; ++b)
      if (doc.source[b] == '\n') has_newline = true;
  }
  switch (gap) {
    case TokenMatcher::Gap::none: return gap_len == 0;
    case TokenMatcher::Gap::space: return gap_len >= 1;
    case TokenMatcher::Gap::wide: return gap_len >= 2 && !has_newline;
    case TokenMatcher::Gap::any: return true;
  }
  return true;
}

bool matcher_matches(const Document& doc, std::size_t token_index, const TokenMatcher& m,
                     std::size_t pattern_start) {
  const Token& t = doc.tokens[token_index];
  if (m.surface && t.surface != *m.surface) return false;
  if (m.normalized && t.normalized != *m.normalized) return false;
  if (m.regex && !std::regex_match(t.surface, *m.regex)) return false;
  if (m.word_class && t.word_class != *m.word_class) return false;
  if (m.same_as) {
    const Token& prev = doc.tokens[pattern_start + *m.same_as - 1];
    if (t.normalized != prev.normalized) return false;
  }
  return gap_satisfied(doc, token_index, m.gap);
}

}  // namespace

std::vector<GrammarRule> parse_rules_text(const std::string& text, const std::string& origin) {
  std::vector<GrammarRule> rules;
  std::set<std::string> ids;
  ParseCursor cur{origin, 0};

  std::istringstream in(text);
  std::string line;
  std::optional<GrammarRule> current;
  std::size_t rule_line = 0;

  auto finish_rule = [&]() {
    if (!current) return;
    ParseCursor at{origin, rule_line};
    if (current->pattern.empty()) at.fail(1, "rule '" + current->id + "' has no match lines");
    if (current->message.empty()) at.fail(1, "rule '" + current->id + "' has no message");
    if (current->suggestion_template) {
      std::size_t max_ref = max_template_ref(*current->suggestion_template, at);
      if (max_ref > current->pattern.size())
        at.fail(1, "rule '" + current->id + "': suggestion references $" + std::to_string(max_ref) +
                       " but only " + std::to_string(current->pattern.size()) + " matchers exist");
    }
    rules.push_back(std::move(*current));
    current.reset();
  };

  while (std::getline(in, line)) {
    ++cur.line;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::size_t first_ns = line.find_first_not_of(" \t");
    if (first_ns == std::string::npos) {
      finish_rule();
      continue;
    }
    if (line[first_ns] == '#') continue;

    if (line.rfind("rule ", first_ns) == first_ns) {
      finish_rule();
      rule_line = cur.line;
      GrammarRule rule;
      std::string rest = line.substr(first_ns + 5);
      std::istringstream parts(rest);
      std::string id;
      parts >> id;
      if (id.empty()) cur.fail(first_ns + 6, "rule line needs an id");
      if (!ids.insert(id).second) cur.fail(first_ns + 6, "duplicate rule id '" + id + "'");
      rule.id = id;
      bool have_category = false;
      std::string attr;
      while (parts >> attr) {
        std::size_t eq = attr.find('=');
        if (eq == std::string::npos) cur.fail(1, "expected key=value, got '" + attr + "'");
        std::string key = attr.substr(0, eq);
        std::string value = attr.substr(eq + 1);
        if (key == "category") {
          auto cat = category_from_name(value);
          if (!cat) cur.fail(1, "unknown category '" + value + "'");
          rule.category = *cat;
          have_category = true;
        } else if (key == "anchor") {
          if (value != "sentence_start") cur.fail(1, "unknown anchor '" + value + "'");
          rule.anchor_sentence_start = true;
        } else {
          cur.fail(1, "unknown rule attribute '" + key + "'");
        }
      }
      if (!have_category) cur.fail(1, "rule '" + id + "' is missing category=");
      current = std::move(rule);
      continue;
    }

    if (!current) cur.fail(first_ns + 1, "expected 'rule <id> ...' to open a block");

    if (line.rfind("match:", first_ns) == first_ns) {
      std::string body = line.substr(first_ns + 6);
      current->pattern.push_back(
          parse_matcher(body, cur, first_ns + 7, current->pattern.size() + 1));
    } else if (line.rfind("suggest:", first_ns) == first_ns) {
      std::string body = line.substr(first_ns + 8);
      std::size_t start = body.find_first_not_of(" \t");
      current->suggestion_template = start == std::string::npos ? "" : body.substr(start);
    } else if (line.rfind("message:", first_ns) == first_ns) {
      std::string body = line.substr(first_ns + 8);
      std::size_t start = body.find_first_not_of(" \t");
      if (start == std::string::npos) cur.fail(first_ns + 9, "empty message");
      current->message = body.substr(start);
    } else {
      cur.fail(first_ns + 1, "unknown directive (expected match:/suggest:/message:)");
    }
  }
  finish_rule();
  return rules;
}

std::vector<GrammarRule> parse_rules(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("rules", "cannot open rule file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_rules_text(ss.str(), path);
}

std::string serialize_rules(const std::vector<GrammarRule>& rules) {
  std::ostringstream out;
  for (const GrammarRule& r : rules) {
    out << "rule " << r.id << " category=" << category_name(r.category);
    if (r.anchor_sentence_start) out << " anchor=sentence_start";
    out << "\n";
    for (const TokenMatcher& m : r.pattern) {
      out << "match:";
      if (m.surface) out << " surface=\"" << *m.surface << "\"";
      if (m.normalized) out << " normalized=\"" << *m.normalized << "\"";
      if (m.regex_text) out << " regex=/" << *m.regex_text << "/";
      if (m.word_class)
        out << " class=" << (*m.word_class == WordClass::grammatical ? "grammatical" : "lexical");
      switch (m.gap) {
        case TokenMatcher::Gap::none: out << " gap=none"; break;
        case TokenMatcher::Gap::space: out << " gap=space"; break;
        case TokenMatcher::Gap::wide: out << " gap=wide"; break;
        case TokenMatcher::Gap::any: break;
      }
      if (m.same_as) out << " same_as=" << *m.same_as;
      out << "\n";
    }
    if (r.suggestion_template) out << "suggest: " << *r.suggestion_template << "\n";
    out << "message: " << r.message << "\n\n";
  }
  return out.str();
}

std::vector<GrammarFinding> check_grammar(const Document& doc,
                                          const std::vector<GrammarRule>& rules) {
  std::vector<GrammarFinding> findings;
  for (const GrammarRule& rule : rules) {
    const std::size_t len = rule.pattern.size();
    for (const SentenceSpan& sent : doc.sentences) {
      if (sent.last_token + 1 < sent.first_token + len) continue;
      std::size_t i = sent.first_token;
      while (i + len - 1 <= sent.last_token) {
        if (rule.anchor_sentence_start && i != sent.first_token) break;
        bool ok = true;
        for (std::size_t p = 0; p < len; ++p) {
          if (!matcher_matches(doc, i + p, rule.pattern[p], i)) {
            ok = false;
            break;
          }
        }
        if (ok) {
          GrammarFinding f;
          f.rule_id = rule.id;
          f.category = rule.category;
          f.first_token = i;
          f.last_token = i + len - 1;
          f.message = rule.message;
          if (rule.suggestion_template)
            f.suggestion = render_suggestion(*rule.suggestion_template, doc, i, len);
          findings.push_back(std::move(f));
          i += len;  // non-overlapping per rule
        } else {
          ++i;
        }
      }
    }
  }
  std::stable_sort(findings.begin(), findings.end(),
                   [](const GrammarFinding& a, const GrammarFinding& b) {
                     if (a.first_token != b.first_token) return a.first_token < b.first_token;
                     return a.rule_id < b.rule_id;
                   });
  return findings;
}

double grammar_error_density(const std::vector<GrammarFinding>& findings, const Document& doc,
                             bool weighted, const SeverityProfile& profile) {
  const std::size_t wc = doc.word_count();
  if (wc == 0) throw Error("grammar", "error density undefined for a zero-word document");
  if (!weighted) return 100.0 * static_cast<double>(findings.size()) / static_cast<double>(wc);
  double sum = 0.0;
  for (const GrammarFinding& f : findings) sum += profile.weight(f.category);
  return 100.0 * sum / static_cast<double>(wc);
}

double grammar_error_coverage(const std::vector<GrammarFinding>& findings, const Document& doc,
                              CoverageGranularity granularity) {
  const std::size_t wc = doc.word_count();
  if (wc == 0) throw Error("grammar", "error coverage undefined for a zero-word document");
  std::size_t distinct = 0;
  if (granularity == CoverageGranularity::bucket) {
    bool seen[kCategoryCount] = {};
    for (const GrammarFinding& f : findings) seen[static_cast<int>(f.category)] = true;
    for (bool b : seen) distinct += b ? 1 : 0;
  } else {
    std::set<std::string> ids;
    for (const GrammarFinding& f : findings) ids.insert(f.rule_id);
    distinct = ids.size();
  }
  return 100.0 * static_cast<double>(distinct) / static_cast<double>(wc);
}

std::string apply_corrections(const Document& doc, const std::vector<GrammarFinding>& findings) {
  std::string out;
  out.reserve(doc.source.size());
  std::size_t cursor = 0;            // byte position copied so far
  std::size_t next_free_token = 0;   // first token not consumed by an applied fix
  for (const GrammarFinding& f : findings) {
    if (!f.suggestion) continue;
    if (f.first_token < next_free_token) continue;  // overlaps an earlier fix
    std::size_t span_start = doc.tokens[f.first_token].byte_start;
    std::size_t span_end = doc.tokens[f.last_token].byte_end;
    out.append(doc.source, cursor, span_start - cursor);
    out.append(*f.suggestion);
    cursor = span_end;
    next_free_token = f.last_token + 1;
  }
  out.append(doc.source, cursor, doc.source.size() - cursor);
  return out;
}

}  // namespace essay

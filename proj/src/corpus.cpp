// corpus.cpp
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

#include "essay/corpus.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "essay/csv.hpp"
#include "essay/error.hpp"
#include "essay/rng.hpp"

namespace essay {

namespace {

std::string normalize_newlines(std::string s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\r') {
      if (i + 1 < s.size() && s[i + 1] == '\n') continue;  // drop CR of CRLF
      out.push_back('\n');
    } else {
      out.push_back(s[i]);
    }
  }
  return out;
}

bool is_blank(const std::string& s) {
  for (char c : s)
    if (c != ' ' && c != '\t' && c != '\n' && c != '\r') return false;
  return true;
}

int parse_score(const std::string& s, std::size_t line, const std::string& field) {
  std::size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(s, &pos);
  } catch (const std::exception&) {
    throw Error("corpus", "line " + std::to_string(line) + ": field '" + field +
                              "' is not an integer: '" + s + "'");
  }
  if (pos != s.size())
    throw Error("corpus", "line " + std::to_string(line) + ": field '" + field +
                              "' is not an integer: '" + s + "'");
  if (v < 1 || v > 10)
    throw Error("corpus", "line " + std::to_string(line) + ": field '" + field + "' score " +
                              std::to_string(v) + " outside [1,10]");
  return v;
}

void validate_record(EssayRecord& rec, std::size_t line, std::set<std::string>& seen_ids) {
  if (rec.essay_id.empty())
    throw Error("corpus", "line " + std::to_string(line) + ": empty essay_id");
  if (!seen_ids.insert(rec.essay_id).second)
    throw Error("corpus",
                "line " + std::to_string(line) + ": duplicate essay_id '" + rec.essay_id + "'");
  if (rec.rater_scores.empty())
    throw Error("corpus", "line " + std::to_string(line) + ": no rater scores");
  if (is_blank(rec.text))
    throw Error("corpus", "line " + std::to_string(line) + ": field 'text' is empty");
  rec.text = normalize_newlines(std::move(rec.text));
}

std::vector<EssayRecord> load_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("corpus", "cannot open corpus file: " + path);
  CsvReader reader(in);
  std::vector<std::string> fields;
  std::size_t line = 0;
  if (!reader.next_row(fields, line)) throw Error("corpus", path + ": empty file");
  const std::vector<std::string> expected = {"essay_id", "topic_id", "score_r1", "score_r2",
                                             "text"};
  if (fields != expected)
    throw Error("corpus", path + ": bad CSV header, expected "
                              "essay_id,topic_id,score_r1,score_r2,text");
  std::vector<EssayRecord> records;
  std::set<std::string> seen_ids;
  while (reader.next_row(fields, line)) {
    if (fields.size() == 1 && fields[0].empty()) continue;  // trailing blank line
    if (fields.size() != 5)
      throw Error("corpus", "line " + std::to_string(line) + ": expected 5 fields, got " +
                                std::to_string(fields.size()));
    EssayRecord rec;
    rec.essay_id = fields[0];
    rec.topic_id = fields[1];
    rec.rater_scores.push_back(parse_score(fields[2], line, "score_r1"));
    rec.rater_scores.push_back(parse_score(fields[3], line, "score_r2"));
    rec.text = fields[4];
    validate_record(rec, line, seen_ids);
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<EssayRecord> load_jsonl(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("corpus", "cannot open corpus file: " + path);
  std::vector<EssayRecord> records;
  std::set<std::string> seen_ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (is_blank(line)) continue;
    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw Error("corpus", "line " + std::to_string(lineno) + ": invalid JSON: " + e.what());
    }
    EssayRecord rec;
    try {
      rec.essay_id = obj.at("essay_id").get<std::string>();
      rec.topic_id = obj.at("topic_id").get<std::string>();
      rec.text = obj.at("text").get<std::string>();
      for (const auto& s : obj.at("rater_scores")) {
        if (!s.is_number_integer())
          throw Error("corpus", "line " + std::to_string(lineno) +
                                    ": field 'rater_scores' must hold integers");
        int v = s.get<int>();
        if (v < 1 || v > 10)
          throw Error("corpus", "line " + std::to_string(lineno) + ": field 'rater_scores' score " +
                                    std::to_string(v) + " outside [1,10]");
        rec.rater_scores.push_back(v);
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error("corpus", "line " + std::to_string(lineno) + ": missing or bad field: " + e.what());
    }
    validate_record(rec, lineno, seen_ids);
    records.push_back(std::move(rec));
  }
  return records;
}

}  // namespace

double EssayRecord::manual_score() const {
  double sum = 0.0;
  for (int s : rater_scores) sum += s;
  return sum / static_cast<double>(rater_scores.size());
}

std::vector<EssayRecord> load_corpus(const std::string& path, CorpusFormat format) {
  return format == CorpusFormat::csv ? load_csv(path) : load_jsonl(path);
}

void save_corpus(const std::string& path, const std::vector<EssayRecord>& records,
                 CorpusFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("corpus", "cannot write corpus file: " + path);
  if (format == CorpusFormat::csv) {
    out << "essay_id,topic_id,score_r1,score_r2,text\n";
    for (const auto& r : records) {
      if (r.rater_scores.size() != 2)
        throw Error("corpus", "CSV format requires exactly two rater scores (essay '" +
                                  r.essay_id + "')");
      out << csv_quote(r.essay_id) << ',' << csv_quote(r.topic_id) << ',' << r.rater_scores[0]
          << ',' << r.rater_scores[1] << ',' << csv_quote(r.text) << '\n';
    }
  } else {
    for (const auto& r : records) {
      nlohmann::json obj;
      obj["essay_id"] = r.essay_id;
      obj["topic_id"] = r.topic_id;
      obj["rater_scores"] = r.rater_scores;
      obj["text"] = r.text;
      out << obj.dump() << '\n';
    }
  }
}

void split_corpus(std::vector<EssayRecord>& records, const std::array<double, 3>& ratios,
                  std::uint64_t seed) {
  for (double r : ratios)
    if (!(r > 0.0)) throw Error("split", "split ratios must be positive");
  double total = ratios[0] + ratios[1] + ratios[2];
  if (std::abs(total - 1.0) > 1e-9)
    throw Error("split", "split ratios must sum to 1");
  const std::size_t n = records.size();
  if (n < 3) throw Error("split", "need at least 3 records to populate all splits");

  std::size_t n_train = static_cast<std::size_t>(std::floor(ratios[0] * static_cast<double>(n)));
  std::size_t n_val = static_cast<std::size_t>(std::floor(ratios[1] * static_cast<double>(n)));
  std::size_t n_test = static_cast<std::size_t>(std::floor(ratios[2] * static_cast<double>(n)));
  n_train += n - (n_train + n_val + n_test);  // remainder to train

  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(order);

  for (std::size_t pos = 0; pos < n; ++pos) {
    Split s = pos < n_train                ? Split::train
              : pos < n_train + n_val      ? Split::validation
                                           : Split::test;
    records[order[pos]].split = s;
  }
}

KappaResult cohen_weighted_kappa(const std::vector<int>& a, const std::vector<int>& b,
                                 KappaWeighting weighting) {
  if (a.size() != b.size()) throw Error("kappa", "rater sequences differ in length");
  if (a.size() < 2) throw Error("kappa", "need at least 2 paired ratings");
  constexpr int kCategories = 10;  // fixed 1..10 scale
  auto check = [](int s) {
    if (s < 1 || s > kCategories) throw Error("kappa", "score outside [1,10]");
  };
  double observed[kCategories][kCategories] = {};
  double marg_a[kCategories] = {};
  double marg_b[kCategories] = {};
  const double n = static_cast<double>(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    check(a[i]);
    check(b[i]);
    observed[a[i] - 1][b[i] - 1] += 1.0;
    marg_a[a[i] - 1] += 1.0;
    marg_b[b[i] - 1] += 1.0;
  }
  double num = 0.0, den = 0.0;
  for (int i = 0; i < kCategories; ++i) {
    for (int j = 0; j < kCategories; ++j) {
      double w = std::abs(i - j) / static_cast<double>(kCategories - 1);
      if (weighting == KappaWeighting::quadratic) w *= w;
      num += w * observed[i][j] / n;
      den += w * (marg_a[i] / n) * (marg_b[j] / n);
    }
  }
  KappaResult result;
  if (den == 0.0) {
    // Both raters constant and equal: no chance disagreement.
    result.value = 1.0;
    result.degenerate = true;
  } else {
    result.value = 1.0 - num / den;
  }
  return result;
}

const char* split_name(Split s) {
  switch (s) {
    case Split::train: return "train";
    case Split::validation: return "validation";
    case Split::test: return "test";
    case Split::unassigned: return "unassigned";
  }
  return "unassigned";
}

}  // namespace essay

// pipeline.cpp
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

#include "essay/pipeline.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "essay/csv.hpp"
#include "essay/error.hpp"

namespace essay {

namespace {

// Shortest round-trip decimal form.
std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

double parse_feature_double(const std::string& s, const std::string& where) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw Error("features", where + ": bad numeric value '" + s + "'");
  return v;
}

std::string require_path(const std::string& path, const char* key) {
  if (path.empty())
    throw Error("config", std::string("missing required config key '") + key + "'");
  return path;
}

// flock-based advisory lock; released on destruction.
class FileLock {
 public:
  explicit FileLock(const std::string& path) {
    fd_ = ::open(path.c_str(), O_CREAT | O_RDWR, 0644);
    if (fd_ < 0) throw Error("lock", "cannot open lock file: " + path);
    if (::flock(fd_, LOCK_EX) != 0) {
      ::close(fd_);
      throw Error("lock", "cannot acquire lock: " + path);
    }
  }
  ~FileLock() {
    if (fd_ >= 0) {
      ::flock(fd_, LOCK_UN);
      ::close(fd_);
    }
  }
  FileLock(const FileLock&) = delete;
  FileLock& operator=(const FileLock&) = delete;

 private:
  int fd_ = -1;
};

WhitelistStore load_or_init_whitelist(const std::string& path, int threshold) {
  if (!path.empty() && std::filesystem::exists(path)) return load_whitelist(path);
  WhitelistStore wl;
  wl.threshold = threshold;
  return wl;
}

std::vector<IndexDocument> corrected_corpus(const std::vector<EssayRecord>& records,
                                            const ExtractionResources& resources) {
  std::vector<IndexDocument> docs;
  docs.reserve(records.size());
  for (const EssayRecord& rec : records) {
    Document doc = make_document(rec.text, resources.lexicon, resources.abbreviations);
    auto findings = check_grammar(doc, resources.rules);
    docs.push_back({rec.essay_id, rec.topic_id, apply_corrections(doc, findings)});
  }
  return docs;
}

nlohmann::json cheat_json(const std::string& essay_id, const CheatReport& cheat) {
  nlohmann::json flags = nlohmann::json::array();
  if (cheat.flag_repeated_content) flags.push_back("repeated_content");
  if (cheat.flag_out_of_context) flags.push_back("out_of_context");
  if (cheat.flag_irrelevant_words) flags.push_back("irrelevant_words");
  nlohmann::json obj;
  if (!essay_id.empty()) obj["essay_id"] = essay_id;
  obj["repetition_score"] = cheat.repetition_score;
  obj["on_topic"] = cheat.on_topic;
  obj["off_vocabulary_ratio"] = cheat.off_vocabulary_ratio;
  obj["context_max_cosine"] = cheat.context_max_cosine;
  obj["flags"] = std::move(flags);
  return obj;
}

void tally_findings(const RunConfig& cfg,
                    const std::vector<std::vector<SpellingFinding>>& per_essay) {
  if (cfg.whitelist_path.empty()) return;
  FileLock lock(cfg.whitelist_path + ".lock");
  WhitelistStore wl = load_or_init_whitelist(cfg.whitelist_path, cfg.whitelist_threshold);
  for (const auto& findings : per_essay) record_unknowns(findings, wl);
  save_whitelist(cfg.whitelist_path, wl);
}

}  // namespace

ExtractionResources load_resources(const RunConfig& cfg, bool need_index) {
  ExtractionResources r;
  r.lexicon = load_lexicon(require_path(cfg.lexicon_path, "lexicon"));
  r.abbreviations = load_abbreviations(require_path(cfg.abbreviations_path, "abbreviations"));
  r.rules = parse_rules(require_path(cfg.rules_path, "rules"));
  r.dictionary = load_dictionary(require_path(cfg.dictionary_path, "dictionary"));
  r.whitelist = load_or_init_whitelist(cfg.whitelist_path, cfg.whitelist_threshold);
  if (need_index) r.index = load_index(require_path(cfg.index_path, "index"));
  r.severity = cfg.severity;
  r.coverage_granularity = cfg.coverage_granularity;
  r.context_threshold = cfg.context_threshold;
  r.cheat_thresholds = cfg.cheat_thresholds;
  r.cheat_thresholds.context = cfg.context_threshold;
  r.damping = cfg.damping;
  return r;
}

void run_build_index(const RunConfig& cfg, const std::string& corpus_path,
                     const std::string& out_path) {
  ExtractionResources resources = load_resources(cfg, false);
  auto records = load_corpus(corpus_path, cfg.corpus_format);
  if (records.size() < 2) throw Error("index", "index needs at least 2 essays");
  std::size_t k = cfg.lsa_k != 0 ? cfg.lsa_k : std::min<std::size_t>(50, records.size() - 1);
  SemanticIndex index =
      build_index(corrected_corpus(records, resources), k, cfg.lsa_weighting, resources.abbreviations);
  save_index(out_path, index);
}

ExtractStats run_extract(const RunConfig& cfg, const std::string& corpus_path,
                         const std::string& features_out, const std::string& cheat_out,
                         bool lenient, bool tally) {
  ExtractionResources resources = load_resources(cfg, true);
  auto records = load_corpus(corpus_path, cfg.corpus_format);

  FeatureFile file;
  file.names = FeatureVector::feature_names();
  file.values = Matrix(0, 0);
  std::vector<std::vector<double>> rows;
  std::vector<nlohmann::json> cheat_rows;
  std::vector<std::vector<SpellingFinding>> spelling_per_essay;
  ExtractStats stats;

  const std::string scope_topic = cfg.context_corpus_wide ? "*" : "";
  for (const EssayRecord& rec : records) {
    try {
      EssayAnalysis analysis = analyze_essay(
          rec.text, scope_topic.empty() ? rec.topic_id : scope_topic, resources);
      file.essay_ids.push_back(rec.essay_id);
      rows.push_back(analysis.features.values);
      cheat_rows.push_back(cheat_json(rec.essay_id, analysis.cheat));
      spelling_per_essay.push_back(analysis.spelling_findings);
      ++stats.written;
    } catch (const Error& e) {
      if (lenient && std::string(e.code()) == "extract") {
        std::cerr << "warning: skipping essay '" << rec.essay_id << "': " << e.what() << "\n";
        ++stats.skipped;
        continue;
      }
      throw;
    }
  }

  file.values = Matrix(rows.size(), FeatureVector::dimensionality());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) file.values(i, j) = rows[i][j];
  write_feature_file(features_out, file);

  if (!cheat_out.empty()) {
    std::ofstream out(cheat_out, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("extract", "cannot write cheat report: " + cheat_out);
    for (const auto& row : cheat_rows) out << row.dump() << '\n';
  }

  if (tally) tally_findings(cfg, spelling_per_essay);
  return stats;
}

void write_feature_file(const std::string& path, const FeatureFile& file) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("features", "cannot write feature file: " + path);
  out << "essay_id";
  for (const std::string& name : file.names) out << ',' << name;
  out << '\n';
  for (std::size_t i = 0; i < file.essay_ids.size(); ++i) {
    out << csv_quote(file.essay_ids[i]);
    for (std::size_t j = 0; j < file.values.cols(); ++j)
      out << ',' << format_double(file.values(i, j));
    out << '\n';
  }
}

FeatureFile read_feature_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("features", "cannot open feature file: " + path);
  CsvReader reader(in);
  std::vector<std::string> fields;
  std::size_t line = 0;
  if (!reader.next_row(fields, line) || fields.size() < 2 || fields[0] != "essay_id")
    throw Error("features", path + ": bad header");
  FeatureFile file;
  file.names.assign(fields.begin() + 1, fields.end());
  std::vector<std::vector<double>> rows;
  while (reader.next_row(fields, line)) {
    if (fields.size() == 1 && fields[0].empty()) continue;
    if (fields.size() != file.names.size() + 1)
      throw Error("features", path + ":" + std::to_string(line) + ": wrong field count");
    file.essay_ids.push_back(fields[0]);
    std::vector<double> row;
    row.reserve(file.names.size());
    for (std::size_t j = 1; j < fields.size(); ++j)
      row.push_back(parse_feature_double(fields[j], path + ":" + std::to_string(line)));
    rows.push_back(std::move(row));
  }
  file.values = Matrix(rows.size(), file.names.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < file.names.size(); ++j) file.values(i, j) = rows[i][j];
  return file;
}

TrainOutcome run_train(const RunConfig& cfg, const std::string& features_path,
                       const std::string& corpus_path, const std::string& model_out) {
  FeatureFile file = read_feature_file(features_path);
  auto records = load_corpus(corpus_path, cfg.corpus_format);

  if (file.essay_ids.size() != records.size())
    throw Error("train", "feature file has " + std::to_string(file.essay_ids.size()) +
                             " rows but corpus has " + std::to_string(records.size()));
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (file.essay_ids[i] != records[i].essay_id)
      throw Error("train", "essay_id mismatch at row " + std::to_string(i + 1) + ": features '" +
                               file.essay_ids[i] + "' vs corpus '" + records[i].essay_id + "'");
  }

  std::vector<double> targets;
  targets.reserve(records.size());
  for (const EssayRecord& rec : records) targets.push_back(rec.manual_score());
  bool constant = true;
  for (double t : targets)
    if (t != targets[0]) {
      constant = false;
      break;
    }
  if (constant) throw Error("train", "constant target: every essay has the same manual score");

  split_corpus(records, cfg.split_ratios, cfg.seed);

  std::vector<std::size_t> train_rows, val_rows, test_rows;
  for (std::size_t i = 0; i < records.size(); ++i) {
    switch (records[i].split) {
      case Split::train: train_rows.push_back(i); break;
      case Split::validation: val_rows.push_back(i); break;
      case Split::test: test_rows.push_back(i); break;
      case Split::unassigned: break;
    }
  }

  auto take = [&](const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) {
    Matrix m(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < cols.size(); ++j) m(i, j) = file.values(rows[i], cols[j]);
    return m;
  };
  auto take_y = [&](const std::vector<std::size_t>& rows) {
    std::vector<double> y;
    y.reserve(rows.size());
    for (std::size_t i : rows) y.push_back(targets[i]);
    return y;
  };

  std::vector<std::size_t> all_cols(file.names.size());
  for (std::size_t j = 0; j < all_cols.size(); ++j) all_cols[j] = j;
  Matrix x_train_full = take(train_rows, all_cols);

  std::vector<std::size_t> selected =
      pca_select(x_train_full, cfg.pca_variance_target, cfg.pca_top_per_component);

  Ensemble ensemble = train_ensemble(take(train_rows, selected), take_y(train_rows),
                                     cfg.ensemble_mode, cfg.hyperparameters, cfg.seed);

  ScoringModel model;
  model.feature_names = file.names;
  model.selected_features = selected;
  model.ensemble = std::move(ensemble);
  save_model(model_out, model);

  TrainOutcome outcome;
  for (std::size_t idx : selected) outcome.selected_names.push_back(file.names[idx]);
  outcome.train_size = train_rows.size();
  outcome.validation_size = val_rows.size();
  outcome.test_size = test_rows.size();
  if (!val_rows.empty())
    outcome.validation = evaluate(model.ensemble, take(val_rows, selected), take_y(val_rows));
  if (!test_rows.empty())
    outcome.test = evaluate(model.ensemble, take(test_rows, selected), take_y(test_rows));
  return outcome;
}

nlohmann::json run_score(const RunConfig& cfg, const std::string& model_path,
                         const std::string& essay_text, const std::string& topic_id, bool tally) {
  ScoringModel model = load_model(model_path);
  if (model.feature_names != FeatureVector::feature_names())
    throw Error("score", "model feature order does not match this build");
  ExtractionResources resources = load_resources(cfg, true);

  EssayAnalysis analysis =
      analyze_essay(essay_text, cfg.context_corpus_wide ? "*" : topic_id, resources);
  double raw = model.predict_raw(analysis.features.values);

  nlohmann::json report;
  report["schema_version"] = 1;
  report["topic_id"] = topic_id;
  report["score"] = clamp_score(raw);
  report["score_raw"] = raw;
  report["on_topic"] = analysis.cheat.on_topic;

  nlohmann::json features = nlohmann::json::object();
  const auto& names = FeatureVector::feature_names();
  for (std::size_t i = 0; i < names.size(); ++i)
    features[names[i]] = analysis.features.values[i];
  report["features"] = std::move(features);

  nlohmann::json grammar = nlohmann::json::object();
  for (int c = 0; c < kCategoryCount; ++c)
    grammar[category_name(static_cast<RuleCategory>(c))] = nlohmann::json::array();
  for (const GrammarFinding& f : analysis.grammar_findings) {
    nlohmann::json item;
    item["rule_id"] = f.rule_id;
    item["message"] = f.message;
    item["span"] = {f.first_token, f.last_token};
    if (f.suggestion) item["suggestion"] = *f.suggestion;
    grammar[category_name(f.category)].push_back(std::move(item));
  }
  report["grammar_findings"] = std::move(grammar);

  nlohmann::json spelling = nlohmann::json::array();
  for (const SpellingFinding& f : analysis.spelling_findings) {
    nlohmann::json item;
    item["surface"] = f.surface;
    item["frequency"] = f.frequency_in_essay;
    item["quantum"] = f.quantum;
    item["proper_noun_candidate"] = f.proper_noun_candidate;
    spelling.push_back(std::move(item));
  }
  report["spelling_findings"] = std::move(spelling);
  report["cheat"] = cheat_json("", analysis.cheat);

  if (tally) tally_findings(cfg, {analysis.spelling_findings});
  return report;
}

std::vector<std::pair<std::string, long>> whitelist_pending(const std::string& store_path) {
  WhitelistStore wl = load_whitelist(store_path);
  std::vector<std::pair<std::string, long>> out;
  for (const std::string& token : wl.pending) {
    auto it = wl.tallies.find(token);
    out.emplace_back(token, it == wl.tallies.end() ? 0 : it->second);
  }
  return out;
}

void whitelist_resolve(const std::string& store_path, const std::string& token,
                       WhitelistDecision decision) {
  FileLock lock(store_path + ".lock");
  WhitelistStore wl = load_whitelist(store_path);
  resolve_pending(wl, token, decision);
  save_whitelist(store_path, wl);
}

nlohmann::json whitelist_stats(const std::string& store_path) {
  WhitelistStore wl = load_whitelist(store_path);
  long tracked = 0;
  for (const auto& [token, tally] : wl.tallies) {
    (void)token;
    tracked += tally;
  }
  nlohmann::json obj;
  obj["threshold"] = wl.threshold;
  obj["accepted"] = wl.accepted.size();
  obj["pending"] = wl.pending.size();
  obj["tracked_tokens"] = wl.tallies.size();
  obj["tracked_occurrences"] = tracked;
  return obj;
}

}  // namespace essay

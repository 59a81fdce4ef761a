// semantics.cpp
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

#include "essay/semantics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

#include "essay/error.hpp"

namespace essay {

namespace {

// Word tokens per sentence, normalized.
std::vector<std::vector<std::string>> sentence_words(const Document& doc) {
  std::vector<std::vector<std::string>> out;
  for (const SentenceSpan& s : doc.sentences) {
    std::vector<std::string> words;
    for (std::size_t i = s.first_token; i <= s.last_token; ++i)
      if (doc.tokens[i].kind == TokenKind::word) words.push_back(doc.tokens[i].normalized);
    out.push_back(std::move(words));
  }
  return out;
}

std::map<std::string, int> ngrams_of_text(const std::string& text, const AbbreviationSet& abbrevs) {
  Document doc;
  doc.source = text;
  doc.tokens = tokenize(doc.source);
  doc.sentences = segment_sentences(doc.tokens, abbrevs);
  return extract_ngrams(doc);
}

// Weighted sparse query vector for a text under the index vocabulary.
std::map<std::uint32_t, double> query_vector(const SemanticIndex& index, const std::string& text,
                                             const AbbreviationSet& abbrevs) {
  std::map<std::uint32_t, double> q;
  for (const auto& [ngram, count] : ngrams_of_text(text, abbrevs)) {
    std::size_t id = index.term_id(ngram);
    if (id == static_cast<std::size_t>(-1)) continue;
    q[static_cast<std::uint32_t>(id)] = static_cast<double>(count) * index.idf[id];
  }
  return q;
}

double sparse_dot(const std::map<std::uint32_t, double>& q,
                  const std::vector<std::pair<std::uint32_t, double>>& doc_vec) {
  double s = 0.0;
  for (const auto& [term, w] : doc_vec) {
    auto it = q.find(term);
    if (it != q.end()) s += it->second * w;
  }
  return s;
}

}  // namespace

std::size_t SemanticIndex::term_id(const std::string& ngram) const {
  auto it = std::lower_bound(vocabulary.begin(), vocabulary.end(), ngram);
  if (it == vocabulary.end() || *it != ngram) return static_cast<std::size_t>(-1);
  return static_cast<std::size_t>(it - vocabulary.begin());
}

bool SemanticIndex::has_topic(const std::string& topic_id) const {
  for (const std::string& t : topic_ids)
    if (t == topic_id) return true;
  return false;
}

std::vector<std::string> SemanticIndex::known_topics() const {
  std::set<std::string> uniq(topic_ids.begin(), topic_ids.end());
  return {uniq.begin(), uniq.end()};
}

std::map<std::string, int> extract_ngrams(const Document& doc, int n_min, int n_max) {
  if (n_min < 1 || n_max < n_min) throw Error("semantics", "bad n-gram range");
  std::map<std::string, int> counts;
  for (const auto& words : sentence_words(doc)) {
    const int len = static_cast<int>(words.size());
    for (int n = n_min; n <= n_max; ++n) {
      for (int start = 0; start + n <= len; ++start) {
        std::string gram = words[static_cast<std::size_t>(start)];
        for (int j = 1; j < n; ++j) {
          gram.push_back(' ');
          gram += words[static_cast<std::size_t>(start + j)];
        }
        counts[gram] += 1;
      }
    }
  }
  return counts;
}

SemanticIndex build_index(const std::vector<IndexDocument>& essays, std::size_t k,
                          IndexWeighting weighting, const AbbreviationSet& abbrevs) {
  if (k < 1) throw Error("semantics", "index rank k must be >= 1");
  if (essays.size() < 2) throw Error("semantics", "index needs at least 2 essays");
  const std::size_t docs = essays.size();

  std::vector<std::map<std::string, int>> counts(docs);
  std::map<std::string, std::uint32_t> df;
  for (std::size_t d = 0; d < docs; ++d) {
    counts[d] = ngrams_of_text(essays[d].corrected_text, abbrevs);
    for (const auto& [gram, c] : counts[d]) {
      (void)c;
      df[gram] += 1;
    }
  }
  if (df.empty()) throw Error("semantics", "all essays are empty; nothing to index");

  SemanticIndex index;
  index.weighting = weighting;
  index.k = k;
  index.vocabulary.reserve(df.size());
  index.idf.reserve(df.size());
  for (const auto& [gram, d] : df) {
    index.vocabulary.push_back(gram);
    index.idf.push_back(weighting == IndexWeighting::tfidf
                            ? std::log(static_cast<double>(docs) / static_cast<double>(d))
                            : 1.0);
  }

  index.doc_vectors.resize(docs);
  for (std::size_t d = 0; d < docs; ++d) {
    auto& vec = index.doc_vectors[d];
    vec.reserve(counts[d].size());
    for (const auto& [gram, c] : counts[d]) {
      std::size_t id = index.term_id(gram);
      double w = static_cast<double>(c) * index.idf[id];
      if (w != 0.0) vec.emplace_back(static_cast<std::uint32_t>(id), w);
    }
    // already sorted: counts is an ordered map and vocabulary shares its order
  }

  // Docs-side Gram matrix from the sparse columns.
  Matrix gram(docs, docs);
  for (std::size_t i = 0; i < docs; ++i) {
    for (std::size_t j = i; j < docs; ++j) {
      const auto& a = index.doc_vectors[i];
      const auto& b = index.doc_vectors[j];
      double s = 0.0;
      std::size_t x = 0, y = 0;
      while (x < a.size() && y < b.size()) {
        if (a[x].first < b[y].first) ++x;
        else if (a[x].first > b[y].first) ++y;
        else {
          s += a[x].second * b[y].second;
          ++x;
          ++y;
        }
      }
      gram(i, j) = s;
      gram(j, i) = s;
    }
  }

  EigenDecomposition eig = jacobi_eigen_symmetric(gram);
  double lambda_max = std::max(eig.values.empty() ? 0.0 : eig.values[0], 0.0);
  double cutoff = lambda_max * 1e-24;
  std::size_t keep = 0;
  while (keep < std::min(k, docs) && eig.values[keep] > cutoff && eig.values[keep] > 0.0) ++keep;
  if (keep == 0) throw Error("semantics", "term-document matrix is numerically zero");

  index.sigma.resize(keep);
  index.projections = Matrix(docs, keep);
  for (std::size_t j = 0; j < keep; ++j) {
    index.sigma[j] = std::sqrt(eig.values[j]);
    // Canonical sign: largest-magnitude component positive, ties low index.
    double best = 0.0;
    std::size_t best_i = 0;
    for (std::size_t i = 0; i < docs; ++i) {
      double mag = std::abs(eig.vectors(i, j));
      if (mag > best) {
        best = mag;
        best_i = i;
      }
    }
    double sign = eig.vectors(best_i, j) < 0.0 ? -1.0 : 1.0;
    for (std::size_t i = 0; i < docs; ++i) index.projections(i, j) = sign * eig.vectors(i, j);
  }

  index.doc_ids.reserve(docs);
  index.topic_ids.reserve(docs);
  for (const IndexDocument& e : essays) {
    index.doc_ids.push_back(e.essay_id);
    index.topic_ids.push_back(e.topic_id);
  }
  return index;
}

std::vector<double> project_essay(const SemanticIndex& index, const std::string& corrected_text,
                                  const AbbreviationSet& abbrevs) {
  const std::size_t kr = index.kept_rank();
  std::vector<double> out(kr, 0.0);
  std::map<std::uint32_t, double> q = query_vector(index, corrected_text, abbrevs);
  if (q.empty()) return out;
  // q^T U Sigma^-1 == (q^T M) V Sigma^-2 with M the weighted term-doc matrix.
  const std::size_t docs = index.doc_vectors.size();
  std::vector<double> s(docs, 0.0);
  for (std::size_t d = 0; d < docs; ++d) s[d] = sparse_dot(q, index.doc_vectors[d]);
  for (std::size_t j = 0; j < kr; ++j) {
    double acc = 0.0;
    for (std::size_t d = 0; d < docs; ++d) acc += s[d] * index.projections(d, j);
    out[j] = acc / (index.sigma[j] * index.sigma[j]);
  }
  return out;
}

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw Error("semantics", "cosine: dimension mismatch");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot / (std::sqrt(na) * std::sqrt(nb));
}

ContextScore context_score(const SemanticIndex& index, const std::string& corrected_text,
                           const std::string& topic_id, double threshold,
                           const AbbreviationSet& abbrevs) {
  const bool corpus_wide = topic_id == "*";
  if (!corpus_wide && !index.has_topic(topic_id)) {
    std::string known;
    for (const std::string& t : index.known_topics()) {
      if (!known.empty()) known += ", ";
      known += t;
    }
    throw Error("semantics", "unknown topic '" + topic_id + "' (index topics: " + known + ")");
  }
  std::vector<double> p = project_essay(index, corrected_text, abbrevs);
  double norm = 0.0;
  for (double v : p) norm += v * v;
  ContextScore score;
  if (norm == 0.0) return score;  // zero-vector query: 0.0, off topic

  const std::size_t kr = index.kept_rank();
  std::vector<double> row(kr);
  double best = -1.0;
  bool any = false;
  for (std::size_t d = 0; d < index.doc_ids.size(); ++d) {
    if (!corpus_wide && index.topic_ids[d] != topic_id) continue;
    for (std::size_t j = 0; j < kr; ++j) row[j] = index.projections(d, j);
    best = std::max(best, cosine_similarity(p, row));
    any = true;
  }
  score.max_cosine = any ? best : 0.0;
  score.on_topic = score.max_cosine > threshold;
  return score;
}

EntityGrid build_entity_grid(const Document& doc, const WordClassLexicon& lexicon) {
  EntityGrid grid;
  grid.sentence_count = doc.sentences.size();

  std::map<std::string, std::size_t> entity_row;
  auto is_entity = [&](const Token& t) {
    if (t.kind != TokenKind::word) return false;
    WordClass wc = t.word_class == WordClass::unknown ? classify_word_class(t, lexicon)
                                                      : t.word_class;
    return wc == WordClass::lexical && !lexicon.is_verb(t.normalized);
  };

  for (std::size_t s = 0; s < doc.sentences.size(); ++s) {
    const SentenceSpan& sent = doc.sentences[s];
    // First verb-listed token of the sentence, if any.
    std::size_t verb_at = static_cast<std::size_t>(-1);
    for (std::size_t i = sent.first_token; i <= sent.last_token; ++i) {
      const Token& t = doc.tokens[i];
      if (t.kind == TokenKind::word && lexicon.is_verb(t.normalized)) {
        verb_at = i;
        break;
      }
    }
    for (std::size_t i = sent.first_token; i <= sent.last_token; ++i) {
      const Token& t = doc.tokens[i];
      if (!is_entity(t)) continue;
      auto [it, inserted] = entity_row.try_emplace(t.normalized, grid.entities.size());
      if (inserted) {
        grid.entities.push_back(t.normalized);
        grid.grid.emplace_back(grid.sentence_count, GridRole::absent);
      }
      GridRole& cell = grid.grid[it->second][s];
      GridRole role;
      if (verb_at == static_cast<std::size_t>(-1)) role = GridRole::other;
      else if (i < verb_at) role = GridRole::subject;
      else role = GridRole::object;
      // Keep the highest role (S > O > X) across repeats in one sentence.
      if (cell == GridRole::absent || static_cast<int>(role) < static_cast<int>(cell)) cell = role;
    }
  }
  return grid;
}

CoherenceFeatures coherence_features(const EntityGrid& grid) {
  CoherenceFeatures out;
  if (grid.sentence_count < 2 || grid.entities.empty()) {
    out.degenerate = true;
    return out;
  }
  std::array<long, kCoherenceFeatureCount> counts{};
  long total = 0;
  for (const auto& row : grid.grid) {
    for (std::size_t s = 0; s + 1 < row.size(); ++s) {
      int from = static_cast<int>(row[s]);
      int to = static_cast<int>(row[s + 1]);
      counts[static_cast<std::size_t>(from * kGridRoleCount + to)] += 1;
      ++total;
    }
  }
  for (int i = 0; i < kCoherenceFeatureCount; ++i)
    out.transitions[static_cast<std::size_t>(i)] =
        static_cast<double>(counts[static_cast<std::size_t>(i)]) / static_cast<double>(total);
  return out;
}

CheatReport detect_cheating(const Document& doc, const std::string& corrected_text,
                            const SemanticIndex& index, const std::string& topic_id,
                            const Dictionary& dict, const WhitelistStore& wl,
                            const CheatThresholds& thresholds, const AbbreviationSet& abbrevs) {
  CheatReport report;

  // Repeated content: duplicate sentence-level word 5-grams.
  long total = 0;
  std::set<std::string> distinct;
  for (const auto& words : sentence_words(doc)) {
    for (std::size_t start = 0; start + 5 <= words.size(); ++start) {
      std::string gram = words[start];
      for (std::size_t j = 1; j < 5; ++j) {
        gram.push_back(' ');
        gram += words[start + j];
      }
      distinct.insert(std::move(gram));
      ++total;
    }
  }
  if (total >= 2)
    report.repetition_score =
        1.0 - static_cast<double>(distinct.size()) / static_cast<double>(total);

  ContextScore context =
      context_score(index, corrected_text, topic_id, thresholds.context, abbrevs);
  report.on_topic = context.on_topic;
  report.context_max_cosine = context.max_cosine;

  long word_tokens = 0;
  long off_vocab = 0;
  for (const Token& t : doc.tokens) {
    if (t.kind != TokenKind::word) continue;
    ++word_tokens;
    if (dict.contains(t.normalized) || wl.accepted.count(t.normalized)) continue;
    if (index.term_id(t.normalized) != static_cast<std::size_t>(-1)) continue;
    ++off_vocab;
  }
  if (word_tokens > 0)
    report.off_vocabulary_ratio =
        static_cast<double>(off_vocab) / static_cast<double>(word_tokens);

  report.flag_repeated_content = report.repetition_score > thresholds.repetition;
  report.flag_out_of_context = !report.on_topic;
  report.flag_irrelevant_words = report.off_vocabulary_ratio > thresholds.off_vocabulary;
  return report;
}

void save_index(const std::string& path, const SemanticIndex& index) {
  nlohmann::json obj;
  obj["version"] = index.version;
  obj["weighting"] = index.weighting == IndexWeighting::tfidf ? "tfidf" : "tf";
  obj["k"] = index.k;
  obj["sigma"] = index.sigma;
  obj["vocabulary"] = index.vocabulary;
  obj["idf"] = index.idf;
  obj["doc_ids"] = index.doc_ids;
  obj["topic_ids"] = index.topic_ids;
  nlohmann::json projections = nlohmann::json::array();
  for (std::size_t d = 0; d < index.doc_ids.size(); ++d) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t j = 0; j < index.kept_rank(); ++j) row.push_back(index.projections(d, j));
    projections.push_back(std::move(row));
  }
  obj["projections"] = std::move(projections);
  nlohmann::json vecs = nlohmann::json::array();
  for (const auto& vec : index.doc_vectors) {
    nlohmann::json jvec = nlohmann::json::array();
    for (const auto& [term, w] : vec) jvec.push_back(nlohmann::json::array({term, w}));
    vecs.push_back(std::move(jvec));
  }
  obj["doc_vectors"] = std::move(vecs);

  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("index", "cannot write index file: " + tmp);
    out << obj.dump() << '\n';
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw Error("index", "cannot replace index file: " + path);
}

SemanticIndex load_index(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("index", "cannot open index file: " + path);
  nlohmann::json obj;
  try {
    in >> obj;
  } catch (const nlohmann::json::exception& e) {
    throw Error("index", path + ": invalid JSON: " + e.what());
  }
  SemanticIndex index;
  try {
    index.version = obj.at("version").get<int>();
    if (index.version != 1)
      throw Error("index", path + ": unsupported index version " + std::to_string(index.version));
    std::string w = obj.at("weighting").get<std::string>();
    if (w == "tfidf") index.weighting = IndexWeighting::tfidf;
    else if (w == "tf") index.weighting = IndexWeighting::tf;
    else throw Error("index", path + ": unknown weighting '" + w + "'");
    index.k = obj.at("k").get<std::size_t>();
    index.sigma = obj.at("sigma").get<std::vector<double>>();
    index.vocabulary = obj.at("vocabulary").get<std::vector<std::string>>();
    index.idf = obj.at("idf").get<std::vector<double>>();
    index.doc_ids = obj.at("doc_ids").get<std::vector<std::string>>();
    index.topic_ids = obj.at("topic_ids").get<std::vector<std::string>>();
    const auto& projections = obj.at("projections");
    index.projections = Matrix(index.doc_ids.size(), index.sigma.size());
    for (std::size_t d = 0; d < index.doc_ids.size(); ++d)
      for (std::size_t j = 0; j < index.sigma.size(); ++j)
        index.projections(d, j) = projections.at(d).at(j).get<double>();
    for (const auto& jvec : obj.at("doc_vectors")) {
      std::vector<std::pair<std::uint32_t, double>> vec;
      vec.reserve(jvec.size());
      for (const auto& entry : jvec)
        vec.emplace_back(entry.at(0).get<std::uint32_t>(), entry.at(1).get<double>());
      index.doc_vectors.push_back(std::move(vec));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error("index", path + ": missing or bad field: " + e.what());
  }
  if (index.doc_vectors.size() != index.doc_ids.size() ||
      index.topic_ids.size() != index.doc_ids.size() ||
      index.idf.size() != index.vocabulary.size())
    throw Error("index", path + ": inconsistent field sizes");
  return index;
}

}  // namespace essay

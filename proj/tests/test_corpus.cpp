// test_corpus.cpp
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

#include <doctest.h>

#include <algorithm>

#include "essay/corpus.hpp"
#include "essay/error.hpp"
#include "oracles.hpp"
#include "testutil.hpp"

using namespace essay;

TEST_CASE("jsonl corpus loads rows in order") {
  testutil::TempDir dir("corpus");
  std::string path = dir.file("c.jsonl");
  testutil::write_file(path,
                       R"({"essay_id":"a","topic_id":"t1","rater_scores":[5,6],"text":"Alpha text."})"
                       "\n"
                       R"({"essay_id":"b","topic_id":"t1","rater_scores":[7,7],"text":"Beta text."})"
                       "\n"
                       R"({"essay_id":"c","topic_id":"t2","rater_scores":[1,10],"text":"Gamma text."})"
                       "\n");
  auto records = load_corpus(path, CorpusFormat::jsonl);
  REQUIRE(records.size() == 3);
  CHECK(records[0].essay_id == "a");
  CHECK(records[1].essay_id == "b");
  CHECK(records[2].essay_id == "c");
  CHECK(records[2].manual_score() == doctest::Approx(5.5));
}

TEST_CASE("score outside 1..10 is rejected with the line number") {
  testutil::TempDir dir("corpus");
  std::string path = dir.file("c.jsonl");
  testutil::write_file(path,
                       R"({"essay_id":"a","topic_id":"t","rater_scores":[5,6],"text":"x y."})"
                       "\n"
                       R"({"essay_id":"b","topic_id":"t","rater_scores":[11,6],"text":"x y."})"
                       "\n");
  try {
    load_corpus(path, CorpusFormat::jsonl);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    CHECK(std::string(e.what()).find("11") != std::string::npos);
  }
}

TEST_CASE("duplicate essay_id is rejected") {
  testutil::TempDir dir("corpus");
  std::string path = dir.file("c.csv");
  testutil::write_file(path,
                       "essay_id,topic_id,score_r1,score_r2,text\n"
                       "a,t,5,5,first\n"
                       "a,t,6,6,second\n");
  CHECK_THROWS_AS(load_corpus(path, CorpusFormat::csv), Error);
}

TEST_CASE("csv round-trips quoted text with commas and newlines byte-exactly") {
  testutil::TempDir dir("corpus");
  EssayRecord rec;
  rec.essay_id = "tricky,id";
  rec.topic_id = "t";
  rec.rater_scores = {3, 4};
  rec.text = "He said, \"go\".\nSecond line, with commas.";
  std::string path = dir.file("c.csv");
  save_corpus(path, {rec}, CorpusFormat::csv);
  auto records = load_corpus(path, CorpusFormat::csv);
  REQUIRE(records.size() == 1);
  CHECK(records[0].essay_id == rec.essay_id);
  CHECK(records[0].text == rec.text);
}

TEST_CASE("malformed csv names the offending line") {
  testutil::TempDir dir("corpus");
  std::string path = dir.file("c.csv");
  testutil::write_file(path,
                       "essay_id,topic_id,score_r1,score_r2,text\n"
                       "a,t,5,5,good row\n"
                       "b,t,5,not_a_score,bad row\n");
  try {
    load_corpus(path, CorpusFormat::csv);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    CHECK(std::string(e.what()).find("score_r2") != std::string::npos);
  }
}

namespace {

std::vector<EssayRecord> dummy_records(std::size_t n) {
  std::vector<EssayRecord> records(n);
  for (std::size_t i = 0; i < n; ++i) {
    records[i].essay_id = "e" + std::to_string(i);
    records[i].topic_id = "t";
    records[i].text = "text";
    records[i].rater_scores = {5, 5};
  }
  return records;
}

std::array<std::size_t, 3> split_sizes(const std::vector<EssayRecord>& records) {
  std::array<std::size_t, 3> sizes{};
  for (const auto& r : records) {
    if (r.split == Split::train) ++sizes[0];
    if (r.split == Split::validation) ++sizes[1];
    if (r.split == Split::test) ++sizes[2];
  }
  return sizes;
}

}  // namespace

TEST_CASE("split: exact division 10 -> 6/2/2") {
  auto records = dummy_records(10);
  split_corpus(records, {0.6, 0.2, 0.2}, 123);
  CHECK(split_sizes(records) == std::array<std::size_t, 3>{6, 2, 2});
}

TEST_CASE("split: floor allocation with remainder to train, 9 -> 6/2/1") {
  auto records = dummy_records(9);
  split_corpus(records, {0.6, 0.2, 0.2}, 99);
  CHECK(split_sizes(records) == std::array<std::size_t, 3>{6, 2, 1});
}

TEST_CASE("split: deterministic per (records, ratios, seed)") {
  auto a = dummy_records(40);
  auto b = dummy_records(40);
  split_corpus(a, {0.6, 0.2, 0.2}, 7);
  split_corpus(b, {0.6, 0.2, 0.2}, 7);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].split == b[i].split);

  auto c = dummy_records(40);
  split_corpus(c, {0.6, 0.2, 0.2}, 8);
  bool any_differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) any_differs |= a[i].split != c[i].split;
  CHECK(any_differs);
}

TEST_CASE("split: fewer than 3 records is an error, bad ratios too") {
  auto records = dummy_records(2);
  CHECK_THROWS_AS(split_corpus(records, {0.6, 0.2, 0.2}, 1), Error);
  auto more = dummy_records(10);
  CHECK_THROWS_AS(split_corpus(more, {0.5, 0.2, 0.2}, 1), Error);
  CHECK_THROWS_AS(split_corpus(more, {1.2, -0.1, -0.1}, 1), Error);
}

TEST_CASE("kappa: perfect agreement is 1") {
  std::vector<int> a = {1, 3, 5, 7, 9, 2};
  CHECK(cohen_weighted_kappa(a, a, KappaWeighting::linear).value == doctest::Approx(1.0));
  CHECK(cohen_weighted_kappa(a, a, KappaWeighting::quadratic).value == doctest::Approx(1.0));
}

TEST_CASE("kappa: crossed example matches the explicit-matrix oracle") {
  std::vector<int> a = {1, 1, 2, 2};
  std::vector<int> b = {2, 2, 1, 1};
  auto r = cohen_weighted_kappa(a, b, KappaWeighting::linear);
  CHECK(r.value == doctest::Approx(oracle::weighted_kappa(a, b, false)).epsilon(1e-12));
  CHECK_FALSE(r.degenerate);
}

TEST_CASE("kappa: 200 random pairs match the oracle within 1e-12, both weightings") {
  Rng rng(4242);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<int> a(200), b(200);
    for (std::size_t i = 0; i < a.size(); ++i) {
      a[i] = 1 + static_cast<int>(rng.below(10));
      b[i] = 1 + static_cast<int>(rng.below(10));
    }
    for (auto w : {KappaWeighting::linear, KappaWeighting::quadratic}) {
      double expected = oracle::weighted_kappa(a, b, w == KappaWeighting::quadratic);
      double got = cohen_weighted_kappa(a, b, w).value;
      CHECK(std::abs(got - expected) < 1e-12);
      // symmetry
      CHECK(std::abs(cohen_weighted_kappa(b, a, w).value - got) < 1e-12);
      // bounded above by 1
      CHECK(got <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("kappa: permuting rater pairs leaves the value unchanged") {
  Rng rng(99);
  std::vector<int> a(50), b(50);
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i] = 1 + static_cast<int>(rng.below(10));
    b[i] = 1 + static_cast<int>(rng.below(10));
  }
  double base = cohen_weighted_kappa(a, b, KappaWeighting::linear).value;
  std::vector<std::size_t> perm(a.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  rng.shuffle(perm);
  std::vector<int> pa(a.size()), pb(b.size());
  for (std::size_t i = 0; i < perm.size(); ++i) {
    pa[i] = a[perm[i]];
    pb[i] = b[perm[i]];
  }
  CHECK(std::abs(cohen_weighted_kappa(pa, pb, KappaWeighting::linear).value - base) < 1e-12);
}

TEST_CASE("kappa: both raters constant and equal is degenerate 1.0") {
  std::vector<int> a = {4, 4, 4};
  auto r = cohen_weighted_kappa(a, a, KappaWeighting::linear);
  CHECK(r.value == 1.0);
  CHECK(r.degenerate);
}

TEST_CASE("kappa: kappa == 1 only for elementwise-equal raters") {
  std::vector<int> a = {1, 2, 3, 4};
  std::vector<int> b = {1, 2, 3, 5};
  CHECK(cohen_weighted_kappa(a, b, KappaWeighting::linear).value < 1.0);
}

TEST_CASE("kappa: length mismatch is an error") {
  std::vector<int> a = {1, 2};
  std::vector<int> b = {1, 2, 3};
  CHECK_THROWS_AS(cohen_weighted_kappa(a, b, KappaWeighting::linear), Error);
}

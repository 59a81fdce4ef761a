// essayscore.cpp
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
// Command-line surface: build-index, extract, train, score, whitelist.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "essay/error.hpp"
#include "essay/pipeline.hpp"

namespace {

struct CommonOptions {
  std::string config_path;
  std::optional<std::uint64_t> seed;

  essay::RunConfig load() const {
    essay::RunConfig cfg = essay::load_config(config_path);
    if (seed) cfg.seed = *seed;
    return cfg;
  }
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "run configuration file")->required();
  cmd->add_option("--seed", opts.seed, "override the configured seed");
}

std::string read_all(std::istream& in) {
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void print_report(const char* label, const essay::EvaluationReport& r) {
  std::cout << label << ": n=" << r.n << " pearson_r=" << r.pearson_r << " mae=" << r.mae
            << " significant_at_0.01=" << (r.significant_at_0_01 ? "yes" : "no") << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nonnative essay scoring pipeline"};
  app.require_subcommand(1);

  CommonOptions index_opts;
  std::string index_corpus, index_out;
  CLI::App* cmd_index = app.add_subcommand("build-index", "build the semantic index");
  add_common(cmd_index, index_opts);
  cmd_index->add_option("--corpus", index_corpus, "corpus file (default: config 'corpus')");
  cmd_index->add_option("--out", index_out, "output index path (default: config 'index')");

  CommonOptions extract_opts;
  std::string extract_corpus, extract_out, extract_cheat;
  bool extract_lenient = false, extract_no_tally = false;
  CLI::App* cmd_extract = app.add_subcommand("extract", "extract per-essay features");
  add_common(cmd_extract, extract_opts);
  cmd_extract->add_option("--corpus", extract_corpus, "corpus file (default: config 'corpus')");
  cmd_extract->add_option("--out", extract_out, "feature CSV output")->required();
  cmd_extract->add_option("--cheat-out", extract_cheat,
                          "cheat report JSONL output (default: <out>.cheat.jsonl)");
  cmd_extract->add_flag("--lenient", extract_lenient, "skip zero-word essays with a warning");
  cmd_extract->add_flag("--no-tally", extract_no_tally, "do not record unknown spellings");

  CommonOptions train_opts;
  std::string train_features, train_corpus, train_out, train_mode;
  CLI::App* cmd_train = app.add_subcommand("train", "train a scoring model");
  add_common(cmd_train, train_opts);
  cmd_train->add_option("--features", train_features, "feature CSV from extract")->required();
  cmd_train->add_option("--corpus", train_corpus, "corpus file (default: config 'corpus')");
  cmd_train->add_option("--out", train_out, "model output path (default: config 'model')");
  cmd_train->add_option("--mode", train_mode, "random_forest | bagging | random_subspace");

  CommonOptions score_opts;
  std::string score_model, score_essay, score_topic;
  bool score_no_tally = false;
  CLI::App* cmd_score = app.add_subcommand("score", "score one essay (file or stdin)");
  add_common(cmd_score, score_opts);
  cmd_score->add_option("--model", score_model, "model file (default: config 'model')");
  cmd_score->add_option("--essay", score_essay, "essay text file (default: stdin)");
  cmd_score->add_option("--topic", score_topic, "topic id of the essay")->required();
  cmd_score->add_flag("--no-tally", score_no_tally, "do not record unknown spellings");

  std::string wl_store;
  std::string wl_token;
  CLI::App* cmd_wl = app.add_subcommand("whitelist", "curate the spelling whitelist");
  cmd_wl->add_option("--store", wl_store, "whitelist store file")->required();
  cmd_wl->require_subcommand(1);
  CLI::App* wl_list = cmd_wl->add_subcommand("list-pending", "tokens awaiting review");
  CLI::App* wl_accept = cmd_wl->add_subcommand("accept", "accept a pending token");
  wl_accept->add_option("token", wl_token, "token to accept")->required();
  CLI::App* wl_reject = cmd_wl->add_subcommand("reject", "reject a pending token");
  wl_reject->add_option("token", wl_token, "token to reject")->required();
  CLI::App* wl_stats = cmd_wl->add_subcommand("stats", "store summary");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_index->parsed()) {
      essay::RunConfig cfg = index_opts.load();
      std::string corpus = index_corpus.empty() ? cfg.corpus_path : index_corpus;
      std::string out = index_out.empty() ? cfg.index_path : index_out;
      if (corpus.empty()) throw essay::Error("config", "no corpus path given");
      if (out.empty()) throw essay::Error("config", "no index output path given");
      essay::run_build_index(cfg, corpus, out);
      std::cout << "wrote " << out << "\n";
    } else if (cmd_extract->parsed()) {
      essay::RunConfig cfg = extract_opts.load();
      std::string corpus = extract_corpus.empty() ? cfg.corpus_path : extract_corpus;
      if (corpus.empty()) throw essay::Error("config", "no corpus path given");
      std::string cheat = extract_cheat.empty() ? extract_out + ".cheat.jsonl" : extract_cheat;
      essay::ExtractStats stats =
          essay::run_extract(cfg, corpus, extract_out, cheat, extract_lenient, !extract_no_tally);
      std::cout << "wrote " << stats.written << " feature rows to " << extract_out;
      if (stats.skipped > 0) std::cout << " (skipped " << stats.skipped << ")";
      std::cout << "\n";
    } else if (cmd_train->parsed()) {
      essay::RunConfig cfg = train_opts.load();
      std::string corpus = train_corpus.empty() ? cfg.corpus_path : train_corpus;
      std::string out = train_out.empty() ? cfg.model_path : train_out;
      if (corpus.empty()) throw essay::Error("config", "no corpus path given");
      if (out.empty()) throw essay::Error("config", "no model output path given");
      if (!train_mode.empty()) {
        if (train_mode == "random_forest") cfg.ensemble_mode = essay::EnsembleMode::random_forest;
        else if (train_mode == "bagging") cfg.ensemble_mode = essay::EnsembleMode::bagging;
        else if (train_mode == "random_subspace")
          cfg.ensemble_mode = essay::EnsembleMode::random_subspace;
        else throw essay::Error("config", "unknown --mode '" + train_mode + "'");
      }
      essay::TrainOutcome outcome = essay::run_train(cfg, train_features, corpus, out);
      std::cout << "selected features (" << outcome.selected_names.size() << "):";
      for (const std::string& name : outcome.selected_names) std::cout << " " << name;
      std::cout << "\n";
      std::cout << "partitions: train=" << outcome.train_size
                << " validation=" << outcome.validation_size << " test=" << outcome.test_size
                << "\n";
      if (outcome.validation_size > 0) print_report("validation", outcome.validation);
      if (outcome.test_size > 0) print_report("test", outcome.test);
      std::cout << "wrote " << out << "\n";
    } else if (cmd_score->parsed()) {
      essay::RunConfig cfg = score_opts.load();
      std::string model = score_model.empty() ? cfg.model_path : score_model;
      if (model.empty()) throw essay::Error("config", "no model path given");
      std::string text;
      if (!score_essay.empty()) {
        std::ifstream in(score_essay, std::ios::binary);
        if (!in) throw essay::Error("score", "cannot open essay file: " + score_essay);
        text = read_all(in);
      } else {
        text = read_all(std::cin);
      }
      nlohmann::json report =
          essay::run_score(cfg, model, text, score_topic, !score_no_tally);
      std::cout << report.dump(2) << "\n";
    } else if (cmd_wl->parsed()) {
      if (wl_list->parsed()) {
        for (const auto& [token, tally] : essay::whitelist_pending(wl_store))
          std::cout << token << "\t" << tally << "\n";
      } else if (wl_accept->parsed()) {
        essay::whitelist_resolve(wl_store, wl_token, essay::WhitelistDecision::accept);
        std::cout << "accepted " << wl_token << "\n";
      } else if (wl_reject->parsed()) {
        essay::whitelist_resolve(wl_store, wl_token, essay::WhitelistDecision::reject);
        std::cout << "rejected " << wl_token << "\n";
      } else if (wl_stats->parsed()) {
        std::cout << essay::whitelist_stats(wl_store).dump(2) << "\n";
      }
    }
  } catch (const essay::Error& e) {
    std::cerr << "error[" << e.code() << "]: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error[internal]: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

// Copyright 2026 The kgmatch Authors.
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

#include <gtest/gtest.h>

#include <chrono>
#include <cmath>
#include <nlohmann/json.hpp>

#include "test_support.hpp"

namespace kgmatch {
namespace {

using testing::read_file;
using testing::run_cli;
using testing::TempDir;
using testing::write_file;

// One small pipeline shared by the suite: synth -> ingest -> build-dataset ->
// train-embeddings. Later tests read the artefacts.
class CliPipeline : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new TempDir("cli");
    const std::string d = dir_->path().string();
    ASSERT_EQ(run_cli("--seed 4 synth --out-dir " + d + "/raw --entities 500"), 0);
    ASSERT_EQ(run_cli("ingest --input " + d + "/raw/source.nt --out " + d + "/src"), 0);
    ASSERT_EQ(run_cli("ingest --input " + d + "/raw/target.nt --out " + d + "/tgt"), 0);
    ASSERT_EQ(run_cli("--seed 4 build-dataset --source " + d + "/src --target " + d + "/tgt --alignment " + d +
                      "/raw/alignment.nt --out " + d + "/ds/fwd"),
              0);
    const auto start = std::chrono::steady_clock::now();
    ASSERT_EQ(run_cli("--seed 4 --threads 2 train-embeddings --graph " + d + "/src --out " + d +
                      "/src.emb --dim 16 --walks 10 --depth 4"),
              0);
    embed_seconds_ = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    ASSERT_EQ(run_cli("--seed 4 --threads 2 train-embeddings --graph " + d + "/tgt --out " + d +
                      "/tgt.emb --dim 16 --walks 10 --depth 4"),
              0);
  }
  static void TearDownTestSuite() {
    delete dir_;
    dir_ = nullptr;
  }

  static std::string p(const std::string& name) { return dir_->file(name); }

  static TempDir* dir_;
  static double embed_seconds_;
};

TempDir* CliPipeline::dir_ = nullptr;
double CliPipeline::embed_seconds_ = 0;

TEST_F(CliPipeline, DatasetFilesExist) {
  for (const char* part : {"train", "valid", "test"}) {
    const MatchDataset ds = read_dataset_file(p("ds/fwd." + std::string(part) + ".tsv"));
    EXPECT_FALSE(ds.empty()) << part;
  }
  const auto meta = nlohmann::json::parse(read_file(p("ds/fwd.meta.json")));
  const auto& counts = meta["counts"];
  EXPECT_EQ(counts["total"].get<std::size_t>(), counts["train"].get<std::size_t>() +
                                                    counts["valid"].get<std::size_t>() +
                                                    counts["test"].get<std::size_t>());
}

TEST_F(CliPipeline, EmbeddingsCoverEveryEntityInReasonableTime) {
  EXPECT_LT(embed_seconds_, 60.0);
  std::ifstream in(p("src.emb"));
  const EmbeddingTable table = EmbeddingTable::load(in);
  EXPECT_EQ(table.dimension(), 16u);
  std::ifstream kg_in(p("src.kg"), std::ios::binary);
  const Kg kg = Kg::load(kg_in);
  for (std::uint32_t e = 0; e < kg.entity_count(); ++e) {
    EXPECT_TRUE(table.contains(kg.entity_iri(EntityId{e}))) << e;
  }
}

TEST_F(CliPipeline, IngestIsByteIdenticalOnRerun) {
  ASSERT_EQ(run_cli("--threads 3 ingest --input " + p("raw/source.nt") + " --out " + p("again/src")), 0);
  EXPECT_EQ(read_file(p("again/src.kg")), read_file(p("src.kg")));
  EXPECT_EQ(read_file(p("again/src.idx")), read_file(p("src.idx")));
  EXPECT_EQ(read_file(p("again/src.names.tsv")), read_file(p("src.names.tsv")));
}

TEST_F(CliPipeline, ReverseDirectionDiffers) {
  ASSERT_EQ(run_cli("--seed 4 build-dataset --reverse --source " + p("src") + " --target " + p("tgt") +
                    " --alignment " + p("raw/alignment.nt") + " --out " + p("ds/rev")),
            0);
  const MatchDataset fwd = read_dataset_file(p("ds/fwd.test.tsv"));
  const MatchDataset rev = read_dataset_file(p("ds/rev.test.tsv"));
  ASSERT_FALSE(rev.empty());
  EXPECT_TRUE(rev.queries[0].query.starts_with("http://target.example/"));
  EXPECT_TRUE(fwd.queries[0].query.starts_with("http://source.example/"));
}

TEST_F(CliPipeline, OracleScoresPerfectly) {
  ASSERT_EQ(run_cli("evaluate --oracle --dataset " + p("ds/fwd.test.tsv") + " --out " + p("oracle.json")), 0);
  const auto j = nlohmann::json::parse(read_file(p("oracle.json")));
  EXPECT_EQ(j["mrr"].get<double>(), 1.0);
}

TEST_F(CliPipeline, RandomModelTracksTheAnalyticBaseline) {
  ASSERT_EQ(run_cli("--seed 11 evaluate --random-model --dataset " + p("ds/fwd.train.tsv") + " --out " +
                    p("random.json")),
            0);
  const auto j = nlohmann::json::parse(read_file(p("random.json")));
  const MatchDataset ds = read_dataset_file(p("ds/fwd.train.tsv"));
  double var = 0;
  for (const auto& q : ds.queries) {
    double m1 = 0, m2 = 0;
    for (std::size_t k = 1; k <= q.size(); ++k) m1 += 1.0 / double(k), m2 += 1.0 / double(k * k);
    const double n = double(q.size());
    var += m2 / n - (m1 / n) * (m1 / n);
  }
  const double se = std::sqrt(var) / double(ds.size());
  EXPECT_LT(std::abs(j["mrr"].get<double>() - j["random_baseline_mrr"].get<double>()), 3 * se);
}

TEST_F(CliPipeline, TrainedReportFollowsTheSchema) {
  ASSERT_EQ(run_cli("--seed 4 train-matcher --train " + p("ds/fwd.train.tsv") + " --valid " + p("ds/fwd.valid.tsv") +
                    " --source-emb " + p("src.emb") + " --target-emb " + p("tgt.emb") +
                    " --hidden 16 --epochs 30 --lr 0.01 --out " + p("m.model") + " --log " + p("m.log")),
            0);
  EXPECT_EQ(read_file(p("m.log")).substr(0, 24), "epoch\tmean_nll\tvalid_mrr");
  ASSERT_EQ(run_cli("evaluate --dataset " + p("ds/fwd.test.tsv") + " --model " + p("m.model") + " --source-emb " +
                    p("src.emb") + " --target-emb " + p("tgt.emb") + " --source-types " +
                    p("raw/source.types.tsv") + " --target-types " + p("raw/target.types.tsv") + " --out " +
                    p("eval.json") + " --csv-prefix " + p("eval")),
            0);
  const auto j = nlohmann::json::parse(read_file(p("eval.json")));
  EXPECT_EQ(j["format"], "kgmatch-eval/1");
  EXPECT_GT(j["mrr"].get<double>(), j["random_baseline_mrr"].get<double>());
  EXPECT_TRUE(j["rank2_same_type"].is_object());
  EXPECT_GT(j["per_type"].size(), 1u);
  EXPECT_EQ(j["metadata"]["model"], "m.model");
  EXPECT_FALSE(read_file(p("eval.buckets.csv")).empty());
  EXPECT_FALSE(read_file(p("eval.types.csv")).empty());

  // Without embeddings a trained model cannot score anything.
  EXPECT_EQ(run_cli("evaluate --dataset " + p("ds/fwd.test.tsv") + " --model " + p("m.model")), 1);
}

TEST_F(CliPipeline, ConfigFileWithFlagOverrides) {
  write_file(p("run.toml"),
             "seed = 4\n[train-matcher]\ntrain = \"" + p("ds/fwd.train.tsv") + "\"\nvalid = \"" +
                 p("ds/fwd.valid.tsv") + "\"\nsource-emb = \"" + p("src.emb") + "\"\ntarget-emb = \"" +
                 p("tgt.emb") + "\"\nkind = \"logreg\"\nepochs = 2\npatience = 0\nout = \"" + p("cfg.model") + "\"\nlog = \"" +
                 p("cfg.log") + "\"\n");
  ASSERT_EQ(run_cli("--config " + p("run.toml") + " train-matcher --epochs 3"), 0);
  const std::string log = read_file(p("cfg.log"));
  EXPECT_EQ(std::count(log.begin(), log.end(), '\n'), 4);  // header + 3 epochs
  EXPECT_NE(read_file(p("cfg.model")).find("logreg"), std::string::npos);
}

TEST_F(CliPipeline, SweepWritesACurve) {
  ASSERT_EQ(run_cli("--seed 4 sweep --train " + p("ds/fwd.train.tsv") + " --valid " + p("ds/fwd.valid.tsv") +
                    " --source-emb " + p("src.emb") + " --target-emb " + p("tgt.emb") +
                    " --hidden 8 --epochs 2 --percents 50 100 --repeats 2 --out " + p("curve.json") + " --csv " +
                    p("curve.csv")),
            0);
  const auto j = nlohmann::json::parse(read_file(p("curve.json")));
  ASSERT_EQ(j["points"].size(), 2u);
  EXPECT_EQ(j["points"][0]["values"].size(), 2u);
}

TEST(CliErrors, MissingInputNamesThePath) {
  TempDir dir("cli-err");
  const std::string log = dir.file("log");
  EXPECT_NE(run_cli("ingest --input /no/such/file.nt --out " + dir.file("x"), log), 0);
  EXPECT_NE(read_file(log).find("/no/such/file.nt"), std::string::npos);
}

TEST(CliErrors, BadConfigIsAUsageError) {
  TempDir dir("cli-err");
  ASSERT_EQ(run_cli("synth --out-dir " + dir.file("raw") + " --entities 50"), 0);
  ASSERT_EQ(run_cli("ingest --input " + dir.file("raw/source.nt") + " --out " + dir.file("g")), 0);
  EXPECT_EQ(run_cli("train-embeddings --graph " + dir.file("g") + " --out " + dir.file("e") + " --walks 0"), 1);
  EXPECT_EQ(run_cli("--threads 0 synth --out-dir " + dir.file("raw2")), 1);
  EXPECT_EQ(run_cli("no-such-command"), 1);
  EXPECT_EQ(run_cli("synth --out-dir " + dir.file("raw3") + " --noise 1.5"), 1);
}

TEST(CliErrors, MissingSnapshotIsADataError) {
  TempDir dir("cli-err");
  EXPECT_EQ(run_cli("train-embeddings --graph " + dir.file("absent") + " --out " + dir.file("e")), 2);
  write_file(dir.file("junk.kg"), "not a snapshot");
  EXPECT_EQ(run_cli("train-embeddings --graph " + dir.file("junk") + " --out " + dir.file("e")), 2);
}

TEST(CliErrors, EmptyAlignmentWarnsButSucceeds) {
  TempDir dir("cli-err");
  ASSERT_EQ(run_cli("synth --out-dir " + dir.file("raw") + " --entities 50"), 0);
  ASSERT_EQ(run_cli("ingest --input " + dir.file("raw/source.nt") + " --out " + dir.file("s")), 0);
  ASSERT_EQ(run_cli("ingest --input " + dir.file("raw/target.nt") + " --out " + dir.file("t")), 0);
  write_file(dir.file("empty.nt"), "");
  const std::string log = dir.file("log");
  EXPECT_EQ(run_cli("build-dataset --source " + dir.file("s") + " --target " + dir.file("t") + " --alignment " +
                        dir.file("empty.nt") + " --out " + dir.file("ds/x"),
                    log),
            0);
  EXPECT_NE(read_file(log).find("warning"), std::string::npos);
}

}  // namespace
}  // namespace kgmatch

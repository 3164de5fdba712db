// Copyright 2026 The CTA Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cta/cli/cli.h"

#include <filesystem>
#include <map>
#include <sstream>

#include "cta/common/file_io.h"
#include "cta/table/json_codec.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace cta {
namespace {

using ::testing::HasSubstr;

const std::filesystem::path kData(CTA_TESTDATA_DIR);

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result Cli(std::vector<std::string> args,
           std::map<std::string, std::string> env = {}) {
  std::ostringstream out, err;
  const int code = RunCli(args, out, err, [&](const char* name) -> const char* {
    auto it = env.find(name);
    return it == env.end() ? nullptr : it->second.c_str();
  });
  return {code, out.str(), err.str()};
}

std::filesystem::path TempDir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "cta_cli_test" / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

std::vector<std::string> PipelineArgs(const std::string& command) {
  return {command,
          "--corpus", (kData / "spider_mini").string(),
          "--retrieval-corpus", (kData / "pipeline" / "corpus.jsonl").string(),
          "--embeddings", (kData / "embeddings" / "vectors_1k.txt").string(),
          "--dictionary", (kData / "dictionary" / "synonyms.json").string(),
          "--stub-scores", (kData / "pipeline" / "recorded_scores.json").string(),
          "--seed", "7"};
}

std::map<std::string, std::string> ReadDir(const std::filesystem::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    files[entry.path().filename().string()] = *ReadFile(entry.path());
  }
  return files;
}

TEST(CliTest, ReportPrintsDrop) {
  const Result r = Cli({"attack", "report", "--dev-em", "70.8", "--runs",
                        (kData / "attack" / "eta_spider_rpl_runs.json").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_THAT(r.out, HasSubstr("-43.2 / -61.0%"));
  EXPECT_THAT(r.out, HasSubstr("27.6 ± 1.8"));
}

TEST(CliTest, ReportJsonUsesFileDevEm) {
  const Result r = Cli({"attack", "report", "--json", "--mode", "stddev",
                        "--runs",
                        (kData / "attack" / "eta_spider_rpl_runs.json").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json json = Json::parse(r.out);
  EXPECT_EQ(json["dev_em"], 70.8);
  EXPECT_NEAR(json["absolute_drop"].get<double>(), 43.2, 1e-9);
}

TEST(CliTest, PerturbIsDeterministicAcrossRunsAndThreads) {
  const auto dir = TempDir("perturb");
  std::vector<std::string> digests;
  std::vector<std::string> outputs;
  int i = 0;
  for (const char* threads : {"1", "1", "8"}) {
    const auto out = dir / ("b" + std::to_string(i++) + ".jsonl");
    auto args = PipelineArgs("perturb");
    args.insert(args.end(), {"--threads", threads, "--out", out.string(), "--audit"});
    const Result r = Cli(args);
    ASSERT_EQ(r.code, 0) << r.err;
    digests.push_back(Json::parse(r.out)["digest"]);
    outputs.push_back(*ReadFile(out));
  }
  EXPECT_EQ(digests[0], digests[1]);
  EXPECT_EQ(digests[0], digests[2]);
  EXPECT_EQ(outputs[0], outputs[1]);
  EXPECT_EQ(outputs[0], outputs[2]);
  // One line per column of the fixture corpus.
  EXPECT_EQ(std::count(outputs[0].begin(), outputs[0].end(), '\n'), 27);
}

TEST(CliTest, AugmentIsDeterministicAcrossRunsAndThreads) {
  const auto dir = TempDir("augment");
  std::vector<std::map<std::string, std::string>> outputs;
  int i = 0;
  for (const char* threads : {"1", "1", "8"}) {
    const auto out = dir / std::to_string(i++);
    auto args = PipelineArgs("augment");
    args.insert(args.end(), {"--threads", threads, "--out", out.string()});
    const Result r = Cli(args);
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(Json::parse(r.out)["records"], 21);
    outputs.push_back(ReadDir(out));
  }
  EXPECT_EQ(outputs[0].size(), 4u);
  EXPECT_EQ(outputs[0], outputs[1]);
  EXPECT_EQ(outputs[0], outputs[2]);
}

TEST(CliTest, StatsMatchHandCounts) {
  const Result r = Cli({"stats", "--json", "--corpus",
                        (kData / "spider_mini").string(), "--annotations",
                        (kData / "annotations.json").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json json = Json::parse(r.out);
  EXPECT_EQ(json["original"]["total_tables"], 7);
  EXPECT_EQ(json["original"]["unique_columns"], 24);
  EXPECT_EQ(json["rpl"]["unique_vocab"], 14);
  EXPECT_EQ(json["add"]["unique_vocab"], 11);
}

TEST(CliTest, AttackSampleThenEvaluate) {
  const auto dir = TempDir("attack");
  const auto run = dir / "run.json";
  const std::vector<std::string> sample = {
      "attack", "sample", "--kind", "add", "--seed", "1",
      "--corpus", (kData / "spider_mini").string(),
      "--annotations", (kData / "annotations.json").string(),
      "--out", run.string()};
  const Result first = Cli(sample);
  ASSERT_EQ(first.code, 0) << first.err;
  const Result second = Cli(sample);
  EXPECT_EQ(first.out, second.out);

  const Result eval = Cli({"attack", "evaluate", "--run", run.string(),
                           "--predictions",
                           (kData / "attack" / "predictions_add.jsonl").string(),
                           "--out", (dir / "result.json").string()});
  ASSERT_EQ(eval.code, 0) << eval.err;
  const Json json = Json::parse(eval.out);
  EXPECT_EQ(json["matched"], 4);
  EXPECT_EQ(json["total"], 7);
  EXPECT_TRUE(std::filesystem::exists(dir / "result.json"));
}

TEST(CliTest, LinkEval) {
  const auto dir = TempDir("links");
  ASSERT_TRUE(WriteFileAtomic(dir / "gold.jsonl",
                              R"({"example_id": "q", "columns": [{"table": "t", "column": "a", "token": 0}, {"table": "t", "column": "b", "token": 1}]})")
                  .ok());
  ASSERT_TRUE(WriteFileAtomic(dir / "pred.jsonl",
                              R"({"example_id": "q", "columns": [{"table": "t", "column": "a", "token": 0}]})")
                  .ok());
  const Result r = Cli({"link-eval", "--gold", (dir / "gold.jsonl").string(),
                        "--pred", (dir / "pred.jsonl").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json json = Json::parse(r.out);
  EXPECT_EQ(json["column"]["precision"], 1.0);
  EXPECT_EQ(json["column"]["recall"], 0.5);
}

TEST(CliTest, ExitCodes) {
  EXPECT_EQ(Cli({}).code, kExitUsage);
  EXPECT_EQ(Cli({"stats", "--no-such-flag"}).code, kExitUsage);
  EXPECT_EQ(Cli({"attack", "report"}).code, kExitUsage);

  const Result missing = Cli({"stats", "--corpus", "/no/such/dir"});
  EXPECT_EQ(missing.code, kExitNotFound);
  const Json error = Json::parse(missing.err);
  EXPECT_EQ(error["error"]["code"], "NOT_FOUND");

  auto args = PipelineArgs("perturb");
  args[args.size() - 4] = "--endpoint";
  args[args.size() - 3] = "http://127.0.0.1:1";
  args.insert(args.end(), {"--out", "/tmp/unused.jsonl"});
  EXPECT_EQ(Cli(args).code, kExitScorerUnreachable);

  EXPECT_EQ(Cli({"stats", "--corpus", (kData / "invalid_corpus.json").string(),
                 "--corpus-format", "single_table"})
                .code,
            kExitInvalidData);
  auto bad_threshold = PipelineArgs("perturb");
  bad_threshold.insert(bad_threshold.end(),
                       {"--rpl-threshold", "1.5", "--out", "/tmp/unused.jsonl"});
  EXPECT_EQ(Cli(bad_threshold).code, kExitInvalidData);
}

TEST(CliConfigTest, FileThenEnvironmentThenFlags) {
  CliConfig config;
  ASSERT_TRUE(ApplyConfigText("# settings\n"
                              "seed = 7\n"
                              "rpl_threshold = 0.7  # stricter\n"
                              "stub_scores = \"a.json\"\n"
                              "\n"
                              "threads=4\n",
                              "cta.conf", config)
                  .ok());
  EXPECT_EQ(config.seed, 7u);
  EXPECT_EQ(config.rpl_threshold, 0.7);
  EXPECT_EQ(config.stub_scores, "a.json");
  EXPECT_EQ(config.threads, 4);
  ApplyEnvironment(
      [](const char* name) -> const char* {
        return std::string_view(name) == "CTA_STUB_SCORES" ? "b.json" : nullptr;
      },
      config);
  EXPECT_EQ(config.stub_scores, "b.json");

  EXPECT_THAT(std::string(ApplyConfigText("nope = 1\n", "c", config).message()),
              HasSubstr("c:1"));
  EXPECT_FALSE(ApplyConfigText("seed = -1\n", "c", config).ok());
  EXPECT_FALSE(ApplyConfigText("k_rerank = 2x\n", "c", config).ok());
  EXPECT_FALSE(ApplyConfigText("just words\n", "c", config).ok());
}

TEST(CliConfigTest, Validation) {
  EXPECT_TRUE(ValidateConfig({}).ok());
  EXPECT_FALSE(ValidateConfig({.add_threshold = -0.1}).ok());
  EXPECT_FALSE(ValidateConfig({.k_retrieve = 0}).ok());
  EXPECT_FALSE(ValidateConfig({.keep_prob = 2}).ok());
  EXPECT_FALSE(ValidateConfig({.threads = 0}).ok());
}

TEST(CliConfigTest, ConfigFileFeedsCommands) {
  const auto dir = TempDir("config");
  const auto conf = dir / "cta.conf";
  ASSERT_TRUE(WriteFileAtomic(conf, "corpus = " + (kData / "spider_mini").string() +
                                        "\nannotations = " +
                                        (kData / "annotations.json").string() + "\n")
                  .ok());
  const Result r = Cli({"stats", "--json", "--config", conf.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(Json::parse(r.out)["rpl"]["unique_columns"], 9);

  // The environment beats the file; a flag beats both.
  const Result env = Cli({"stats", "--json", "--config", conf.string()},
                         {{"CTA_CORPUS", "/no/such/dir"}});
  EXPECT_EQ(env.code, kExitNotFound);
  const Result flag =
      Cli({"stats", "--json", "--config", conf.string(), "--corpus",
           (kData / "spider_mini").string()},
          {{"CTA_CORPUS", "/no/such/dir"}});
  EXPECT_EQ(flag.code, 0) << flag.err;
}

}  // namespace
}  // namespace cta

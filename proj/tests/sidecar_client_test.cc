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

#include "cta/sidecar/sidecar_client.h"

#include <atomic>
#include <filesystem>
#include <thread>

#include "cta/common/file_io.h"
#include "cta/common/str_cat.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "httplib.h"

namespace cta {
namespace {

using ::testing::ElementsAre;
using ::testing::HasSubstr;
using Json = nlohmann::json;

const std::filesystem::path kData(CTA_TESTDATA_DIR);

// In-process stand-in for the inference service, serving recorded scores.
class FakeSidecar {
 public:
  FakeSidecar() : scorer_(*RecordedScorer::Load(kData / "nli" /
                                                "recorded_scores.json")) {
    server_.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
      res.set_content("ok", "text/plain");
    });
    server_.Post("/v1/nli", [this](const httplib::Request& req,
                                   httplib::Response& res) {
      ++nli_calls;
      if (unavailable_replies > 0) {
        --unavailable_replies;
        res.status = 503;
        return;
      }
      Json body = Json::parse(req.body, nullptr, false);
      if (body.is_discarded() || !body.contains("premise") ||
          !body.contains("hypothesis") || body["premise"] == "") {
        res.status = 400;
        res.set_content("malformed", "text/plain");
        return;
      }
      if (corrupt) {
        res.set_content(R"({"entail": 0.9, "neutral": 0.9, "contradict": 0,
                            "entail_logit": 1})",
                        "application/json");
        return;
      }
      auto scores = scorer_.Score(body["premise"].get<std::string>(),
                                  body["hypothesis"].get<std::string>());
      res.set_content(NliScoresToWire(*scores).dump(), "application/json");
    });
    server_.Post("/v1/nli_batch", [this](const httplib::Request& req,
                                         httplib::Response& res) {
      ++batch_calls;
      Json body = Json::parse(req.body);
      Json results = Json::array();
      for (const auto& pair : body["pairs"]) {
        results.push_back(NliScoresToWire(
            *scorer_.Score(pair["premise"].get<std::string>(),
                           pair["hypothesis"].get<std::string>())));
      }
      res.set_content(Json{{"results", results}}.dump(), "application/json");
    });
    server_.Post("/v1/embed_table", [this](const httplib::Request& req,
                                           httplib::Response& res) {
      last_embed_request = Json::parse(req.body);
      const size_t columns = last_embed_request["columns"].size();
      Json vector = Json::array();
      for (size_t i = 0; i < 3; ++i) vector.push_back(double(columns + i));
      res.set_content(Json{{"vector", vector}, {"dims", wrong_dims ? 4 : 3}}.dump(),
                      "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~FakeSidecar() {
    server_.stop();
    thread_.join();
  }

  SidecarOptions Options() const {
    return {.endpoint = StrCat("http://127.0.0.1:", port_),
            .retries = 2,
            .backoff = std::chrono::milliseconds(1)};
  }

  std::atomic<int> nli_calls{0};
  std::atomic<int> batch_calls{0};
  std::atomic<int> unavailable_replies{0};
  std::atomic<bool> corrupt{false};
  std::atomic<bool> wrong_dims{false};
  Json last_embed_request;

 private:
  RecordedScorer scorer_;
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

TEST(SidecarClientTest, HealthAndSingleNli) {
  FakeSidecar sidecar;
  SidecarClient client(sidecar.Options());
  EXPECT_TRUE(client.Health().ok());
  auto scores = client.Nli("Runner-up.", "Second place.");
  ASSERT_TRUE(scores.ok()) << scores.status();
  EXPECT_EQ(scores->entail, 0.971);
}

TEST(SidecarClientTest, BatchesAreChunked) {
  FakeSidecar sidecar;
  SidecarOptions options = sidecar.Options();
  options.batch_size = 3;
  SidecarClient client(options);
  std::vector<TextPair> pairs;
  for (int i = 0; i < 7; ++i) pairs.push_back({"Company sales.", "Company profits."});
  pairs.push_back({"unknown", "pair"});
  auto scores = client.NliBatch(pairs);
  ASSERT_TRUE(scores.ok()) << scores.status();
  ASSERT_EQ(scores->size(), 8u);
  EXPECT_EQ((*scores)[0].entail, 0.019);
  EXPECT_EQ((*scores)[7].entail, 0.05);
  EXPECT_EQ(sidecar.batch_calls.load(), 3);
}

TEST(SidecarClientTest, RetriesServiceUnavailable) {
  FakeSidecar sidecar;
  sidecar.unavailable_replies = 2;
  SidecarClient client(sidecar.Options());
  EXPECT_TRUE(client.Nli("Runner-up.", "Second place.").ok());
  EXPECT_EQ(sidecar.nli_calls.load(), 3);

  sidecar.unavailable_replies = 3;
  auto exhausted = client.Nli("Runner-up.", "Second place.");
  EXPECT_EQ(exhausted.status().code(), absl::StatusCode::kUnavailable);
  EXPECT_THAT(exhausted.status().message(), HasSubstr("503"));
}

TEST(SidecarClientTest, UnreachableEndpointIsUnavailable) {
  // Nothing listens on port 1.
  SidecarClient client({.endpoint = "http://127.0.0.1:1",
                        .connect_timeout = std::chrono::milliseconds(200),
                        .read_timeout = std::chrono::milliseconds(200),
                        .retries = 1,
                        .backoff = std::chrono::milliseconds(1)});
  EXPECT_EQ(client.Health().code(), absl::StatusCode::kUnavailable);
  HttpNliScorer scorer(client);
  const std::vector<std::string> originals = {"a."};
  EXPECT_EQ(DecideAdd("b.", originals, scorer).status().code(),
            absl::StatusCode::kUnavailable);
}

TEST(SidecarClientTest, SchemaViolationsAreInternal) {
  FakeSidecar sidecar;
  sidecar.corrupt = true;
  SidecarClient client(sidecar.Options());
  auto scores = client.Nli("a", "b");
  EXPECT_EQ(scores.status().code(), absl::StatusCode::kInternal);
  EXPECT_THAT(scores.status().message(), HasSubstr("sum to"));
  sidecar.wrong_dims = true;
  EXPECT_EQ(client.EmbedTable({.table_id = "t", .columns = {{.name = "a"}}})
                .status()
                .code(),
            absl::StatusCode::kInternal);
}

TEST(SidecarClientTest, EmbedRequestShape) {
  FakeSidecar sidecar;
  SidecarClient client(sidecar.Options());
  const Table table{.table_id = "students",
                    .caption = "Student exam results",
                    .columns = {{.name = "Name", .cell_samples = {"Ann"}},
                                {.name = "Score", .type = ColumnType::kNumber}}};
  auto vector = client.EmbedTable(table);
  ASSERT_TRUE(vector.ok()) << vector.status();
  EXPECT_THAT(*vector, ElementsAre(2.0, 3.0, 4.0));
  auto golden = ReadFile(kData / "sidecar" / "embed_request.json");
  ASSERT_TRUE(golden.ok());
  EXPECT_EQ(sidecar.last_embed_request, Json::parse(*golden));
  EXPECT_EQ(EmbedRequestJson(table, true)["cells"],
            Json::parse(R"([["Ann"], []])"));
  EXPECT_EQ(client.EmbedTable({.table_id = "e"}).status().code(),
            absl::StatusCode::kInvalidArgument);
}

TEST(SidecarClientTest, AdaptersDelegate) {
  FakeSidecar sidecar;
  SidecarClient client(sidecar.Options());
  HttpEmbedder embedder(client);
  auto column = embedder.EmbedColumn("student", {.name = "Height"});
  ASSERT_TRUE(column.ok());
  EXPECT_EQ(sidecar.last_embed_request["caption"], "student");
  EXPECT_EQ(sidecar.last_embed_request["columns"].size(), 1u);
  HttpNliScorer scorer(client);
  auto e = BidirectionalEntailment("Runner-up.", "Second place.", scorer);
  ASSERT_TRUE(e.ok());
  EXPECT_TRUE(DecideRpl(*e));
}

TEST(SidecarClientTest, BadRequestIsNotRetried) {
  FakeSidecar sidecar;
  SidecarClient client(sidecar.Options());
  auto scores = client.Nli("", "b");
  EXPECT_EQ(scores.status().code(), absl::StatusCode::kInvalidArgument);
  EXPECT_EQ(sidecar.nli_calls.load(), 1);
}

TEST(WireTest, NliRoundTrip) {
  const NliScores scores{0.7, 0.2, 0.1, 1.25};
  EXPECT_EQ(*NliScoresFromWire(NliScoresToWire(scores)), scores);
  EXPECT_FALSE(NliScoresFromWire(Json::parse(R"({"entail": 1})")).ok());
}

}  // namespace
}  // namespace cta

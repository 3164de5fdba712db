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

#include <algorithm>
#include <cmath>
#include <thread>

#include "cta/common/str_cat.h"
#include "httplib.h"

namespace cta {
namespace {

absl::Status Malformed(std::string_view path, std::string_view what) {
  return absl::InternalError(
      StrCat("malformed sidecar reply from ", path, ": ", what));
}

}  // namespace

SidecarClient::SidecarClient(SidecarOptions options)
    : options_(std::move(options)) {}

absl::StatusOr<nlohmann::json> SidecarClient::Call(
    std::string_view method, const std::string& path,
    const nlohmann::json* body) const {
  std::string last_error = "no attempt made";
  for (int attempt = 0; attempt <= options_.retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(options_.backoff * (1 << (attempt - 1)));
    }
    httplib::Client client(options_.endpoint);
    if (!client.is_valid()) {
      return absl::InvalidArgumentError(
          StrCat("invalid sidecar endpoint \"", options_.endpoint, "\""));
    }
    client.set_connection_timeout(options_.connect_timeout);
    client.set_read_timeout(options_.read_timeout);
    httplib::Result result =
        method == "GET"
            ? client.Get(path)
            : client.Post(path, body == nullptr ? "{}" : body->dump(),
                          "application/json");
    if (!result) {
      last_error = httplib::to_string(result.error());
      continue;
    }
    if (result->status == 503) {
      last_error = "503 service unavailable";
      continue;
    }
    if (result->status >= 400 && result->status < 500) {
      return absl::InvalidArgumentError(StrCat(
          "sidecar rejected ", path, " with ", result->status, ": ",
          result->body));
    }
    if (result->status != 200) {
      last_error = StrCat("HTTP ", result->status);
      continue;
    }
    if (method == "GET" && path == "/healthz") return nlohmann::json();
    nlohmann::json reply = nlohmann::json::parse(result->body, nullptr, false);
    if (reply.is_discarded()) return Malformed(path, "body is not JSON");
    return reply;
  }
  return absl::UnavailableError(
      StrCat("sidecar at ", options_.endpoint, path, " unreachable after ",
             options_.retries + 1, " attempts: ", last_error));
}

absl::Status SidecarClient::Health() const {
  return Call("GET", "/healthz", nullptr).status();
}

nlohmann::json NliScoresToWire(const NliScores& scores) {
  return {{"entail", scores.entail},
          {"neutral", scores.neutral},
          {"contradict", scores.contradict},
          {"entail_logit", scores.entail_logit}};
}

absl::StatusOr<NliScores> NliScoresFromWire(const nlohmann::json& json) {
  if (!json.is_object()) return Malformed("/v1/nli", "reply is not an object");
  NliScores scores;
  for (auto [key, field] : {std::pair{"entail", &scores.entail},
                            std::pair{"neutral", &scores.neutral},
                            std::pair{"contradict", &scores.contradict},
                            std::pair{"entail_logit", &scores.entail_logit}}) {
    if (!json.contains(key) || !json[key].is_number()) {
      return Malformed("/v1/nli", StrCat("missing numeric \"", key, "\""));
    }
    *field = json[key].get<double>();
  }
  if (auto s = ValidateNliScores(scores); !s.ok()) {
    return Malformed("/v1/nli", std::string(s.message()));
  }
  return scores;
}

absl::StatusOr<NliScores> SidecarClient::Nli(
    std::string_view premise, std::string_view hypothesis) const {
  const nlohmann::json body = {{"premise", premise},
                               {"hypothesis", hypothesis}};
  auto reply = Call("POST", "/v1/nli", &body);
  if (!reply.ok()) return reply.status();
  return NliScoresFromWire(*reply);
}

absl::StatusOr<std::vector<NliScores>> SidecarClient::NliBatch(
    std::span<const TextPair> pairs) const {
  std::vector<NliScores> out;
  out.reserve(pairs.size());
  const size_t chunk = std::max<size_t>(options_.batch_size, 1);
  for (size_t start = 0; start < pairs.size(); start += chunk) {
    const size_t end = std::min(pairs.size(), start + chunk);
    nlohmann::json body = {{"pairs", nlohmann::json::array()}};
    for (size_t i = start; i < end; ++i) {
      body["pairs"].push_back(
          {{"premise", pairs[i].first}, {"hypothesis", pairs[i].second}});
    }
    auto reply = Call("POST", "/v1/nli_batch", &body);
    if (!reply.ok()) return reply.status();
    if (!reply->contains("results") || !(*reply)["results"].is_array() ||
        (*reply)["results"].size() != end - start) {
      return Malformed("/v1/nli_batch",
                       StrCat("expected ", end - start, " results"));
    }
    for (const auto& item : (*reply)["results"]) {
      auto scores = NliScoresFromWire(item);
      if (!scores.ok()) return scores.status();
      out.push_back(*scores);
    }
  }
  return out;
}

nlohmann::json EmbedRequestJson(const Table& table, bool include_cells) {
  nlohmann::json body;
  body["caption"] = table.caption.value_or("");
  body["columns"] = nlohmann::json::array();
  for (const Column& column : table.columns) {
    body["columns"].push_back(
        {{"name", column.name}, {"type", ColumnTypeName(column.type)}});
  }
  if (include_cells) {
    nlohmann::json cells = nlohmann::json::array();
    for (const Column& column : table.columns) cells.push_back(column.cell_samples);
    body["cells"] = std::move(cells);
  }
  return body;
}

absl::StatusOr<Vector> SidecarClient::EmbedTable(const Table& table,
                                                 bool include_cells) const {
  if (table.columns.empty()) {
    return absl::InvalidArgumentError(
        StrCat("table ", table.table_id, " has no columns to embed"));
  }
  const nlohmann::json body = EmbedRequestJson(table, include_cells);
  auto reply = Call("POST", "/v1/embed_table", &body);
  if (!reply.ok()) return reply.status();
  const nlohmann::json& json = *reply;
  if (!json.is_object() || !json.contains("vector") ||
      !json["vector"].is_array() || !json.contains("dims") ||
      !json["dims"].is_number_integer()) {
    return Malformed("/v1/embed_table", "needs \"vector\" and \"dims\"");
  }
  Vector vector;
  for (const auto& x : json["vector"]) {
    if (!x.is_number() || !std::isfinite(x.get<double>())) {
      return Malformed("/v1/embed_table", "non-numeric component");
    }
    vector.push_back(x.get<double>());
  }
  if (vector.size() != json["dims"].get<size_t>() || vector.empty()) {
    return Malformed("/v1/embed_table",
                     StrCat("dims ", json["dims"].dump(), " but ",
                            vector.size(), " components"));
  }
  return vector;
}

absl::StatusOr<NliScores> HttpNliScorer::Score(
    std::string_view premise, std::string_view hypothesis) const {
  return client_.Nli(premise, hypothesis);
}

absl::StatusOr<std::vector<NliScores>> HttpNliScorer::ScoreBatch(
    std::span<const TextPair> pairs) const {
  return client_.NliBatch(pairs);
}

absl::StatusOr<Vector> HttpEmbedder::EmbedTable(const Table& table) const {
  return client_.EmbedTable(table);
}

absl::StatusOr<Vector> HttpEmbedder::EmbedColumn(std::string_view tpe,
                                                 const Column& column) const {
  Table single{.table_id = column.name,
               .caption = std::string(tpe),
               .columns = {column}};
  return client_.EmbedTable(single);
}

}  // namespace cta

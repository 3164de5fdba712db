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

#ifndef CTA_SIDECAR_SIDECAR_CLIENT_H_
#define CTA_SIDECAR_SIDECAR_CLIENT_H_

#include <chrono>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "cta/embedding/embedding_store.h"
#include "cta/nli_gate/nli_gate.h"
#include "cta/retriever/retriever.h"
#include "cta/table/table_model.h"
#include "json.hpp"

namespace cta {

struct SidecarOptions {
  // "http://host:port".
  std::string endpoint;
  std::chrono::milliseconds connect_timeout{2000};
  std::chrono::milliseconds read_timeout{60000};
  // Transport failures and 503 responses are retried this many times.
  int retries = 3;
  std::chrono::milliseconds backoff{200};
  // Pairs per /v1/nli_batch request.
  size_t batch_size = 64;
};

// JSON client for the inference service:
//   GET  /healthz
//   POST /v1/nli          {premise, hypothesis}
//                      -> {entail, neutral, contradict, entail_logit}
//   POST /v1/nli_batch    {pairs: [{premise, hypothesis}, ...]}
//                      -> {results: [nli response, ...]}
//   POST /v1/embed_table  {caption, columns: [{name, type}], cells?}
//                      -> {vector, dims}
// Exhausted retries are Unavailable; a 4xx reply is InvalidArgument; a reply
// that breaks the wire schema is Internal. Safe to share across threads.
class SidecarClient {
 public:
  explicit SidecarClient(SidecarOptions options);

  absl::Status Health() const;
  absl::StatusOr<NliScores> Nli(std::string_view premise,
                                std::string_view hypothesis) const;
  absl::StatusOr<std::vector<NliScores>> NliBatch(
      std::span<const TextPair> pairs) const;
  absl::StatusOr<Vector> EmbedTable(const Table& table,
                                    bool include_cells = false) const;

  const SidecarOptions& options() const { return options_; }

 private:
  absl::StatusOr<nlohmann::json> Call(std::string_view method,
                                      const std::string& path,
                                      const nlohmann::json* body) const;

  SidecarOptions options_;
};

nlohmann::json EmbedRequestJson(const Table& table, bool include_cells);
absl::StatusOr<NliScores> NliScoresFromWire(const nlohmann::json& json);
nlohmann::json NliScoresToWire(const NliScores& scores);

class HttpNliScorer : public NliScorer {
 public:
  explicit HttpNliScorer(const SidecarClient& client) : client_(client) {}

  absl::StatusOr<NliScores> Score(std::string_view premise,
                                  std::string_view hypothesis) const override;
  absl::StatusOr<std::vector<NliScores>> ScoreBatch(
      std::span<const TextPair> pairs) const override;

 private:
  const SidecarClient& client_;
};

// Columns are embedded as a one-column table captioned with the TPE.
class HttpEmbedder : public Embedder {
 public:
  explicit HttpEmbedder(const SidecarClient& client) : client_(client) {}

  absl::StatusOr<Vector> EmbedTable(const Table& table) const override;
  absl::StatusOr<Vector> EmbedColumn(std::string_view tpe,
                                     const Column& column) const override;

 private:
  const SidecarClient& client_;
};

}  // namespace cta

#endif  // CTA_SIDECAR_SIDECAR_CLIENT_H_

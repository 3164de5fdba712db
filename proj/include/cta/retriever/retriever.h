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

#ifndef CTA_RETRIEVER_RETRIEVER_H_
#define CTA_RETRIEVER_RETRIEVER_H_

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "cta/embedding/embedding_store.h"
#include "cta/table/table_model.h"

namespace cta {

// Maps tables and contextualized columns to dense vectors. Implementations
// must be deterministic and safe to call from several threads.
class Embedder {
 public:
  virtual ~Embedder() = default;
  virtual absl::StatusOr<Vector> EmbedTable(const Table& table) const = 0;
  virtual absl::StatusOr<Vector> EmbedColumn(std::string_view tpe,
                                             const Column& column) const = 0;
};

// Offline embedder over static phrase vectors. A table is the mean of the
// phrase vectors of its caption and column names; a column is the mean of
// its TPE and name vectors. Pieces with no in-vocabulary word are skipped;
// NotFound when nothing is embeddable.
class FallbackEmbedder : public Embedder {
 public:
  explicit FallbackEmbedder(const EmbeddingStore& store) : store_(store) {}

  absl::StatusOr<Vector> EmbedTable(const Table& table) const override;
  absl::StatusOr<Vector> EmbedColumn(std::string_view tpe,
                                     const Column& column) const override;

 private:
  const EmbeddingStore& store_;
};

struct ScoredTable {
  std::string table_id;
  double score = 0;

  bool operator==(const ScoredTable&) const = default;
};

struct IndexBuildOptions {
  int threads = 1;
  // Build aborts when more than this fraction of tables fail to embed.
  double max_failure_rate = 0.01;
};

struct IndexBuildReport {
  // "table_id: message" for every table that failed to embed.
  std::vector<std::string> failures;
};

// Exact flat cosine index. Entries are sorted by table id, so the index and
// its serialized bytes do not depend on corpus order or thread count.
class TableIndex {
 public:
  struct Entry {
    std::string table_id;
    Vector vector;
    double norm = 0;
  };

  // Duplicate table ids are InvalidArgument. Tables that fail to embed, or
  // embed to a zero vector or the wrong width, are left out and listed in
  // `report`; beyond the allowed failure rate the build is Aborted.
  static absl::StatusOr<TableIndex> Build(std::span<const Table> corpus,
                                          const Embedder& embedder,
                                          const IndexBuildOptions& options = {},
                                          IndexBuildReport* report = nullptr);

  // Index file: magic "CTAIDX01", u32 version, u32 dims, u64 count, then per
  // entry (sorted by id) u32 id length, id bytes, dims little-endian float64.
  std::string Serialize() const;
  static absl::StatusOr<TableIndex> Deserialize(std::string_view bytes,
                                                std::string_view source);
  absl::Status Save(const std::filesystem::path& path) const;
  static absl::StatusOr<TableIndex> Load(const std::filesystem::path& path);

  int dims() const { return dims_; }
  size_t size() const { return entries_.size(); }
  const std::vector<Entry>& entries() const { return entries_; }

  // The k best entries by cosine to `query`, best first, ties by ascending
  // id. An entry whose id equals `exclude_id` is skipped. k larger than the
  // number of eligible entries is InvalidArgument.
  absl::StatusOr<std::vector<ScoredTable>> Search(
      const Vector& query, size_t k, std::string_view exclude_id = {}) const;

 private:
  int dims_ = 0;
  std::vector<Entry> entries_;
};

inline constexpr size_t kDefaultRetrieveK = 100;

// Embeds `query` and searches the index, excluding the query's own id.
absl::StatusOr<std::vector<ScoredTable>> Retrieve(
    const TableIndex& index, const Table& query, const Embedder& embedder,
    size_t k = kDefaultRetrieveK);

}  // namespace cta

#endif  // CTA_RETRIEVER_RETRIEVER_H_

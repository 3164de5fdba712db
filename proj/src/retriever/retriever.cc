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

#include "cta/retriever/retriever.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <optional>
#include <set>
#include <thread>

#include "cta/common/file_io.h"
#include "cta/common/str_cat.h"

namespace cta {
namespace {

constexpr char kMagic[8] = {'C', 'T', 'A', 'I', 'D', 'X', '0', '1'};
constexpr uint32_t kVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "index files assume a little-endian host");

template <typename T>
void PutRaw(std::string& out, T value) {
  char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  out.append(bytes, sizeof(T));
}

template <typename T>
bool GetRaw(std::string_view& in, T& value) {
  if (in.size() < sizeof(T)) return false;
  std::memcpy(&value, in.data(), sizeof(T));
  in.remove_prefix(sizeof(T));
  return true;
}

// Accumulates the mean of whichever phrases are embeddable.
class MeanVector {
 public:
  explicit MeanVector(const EmbeddingStore& store) : store_(store) {}

  void Add(std::string_view phrase) {
    auto vector = store_.LookupPhrase(phrase);
    if (!vector.has_value()) return;
    if (sum_.empty()) sum_.assign(vector->size(), 0.0);
    for (size_t i = 0; i < sum_.size(); ++i) sum_[i] += (*vector)[i];
    ++count_;
  }

  absl::StatusOr<Vector> Finish(std::string_view what) {
    if (count_ == 0) {
      return absl::NotFoundError(
          StrCat("no embeddable phrase in ", what));
    }
    for (double& x : sum_) x /= count_;
    return std::move(sum_);
  }

 private:
  const EmbeddingStore& store_;
  Vector sum_;
  int count_ = 0;
};

bool Better(const ScoredTable& a, const ScoredTable& b) {
  if (a.score != b.score) return a.score > b.score;
  return a.table_id < b.table_id;
}

}  // namespace

absl::StatusOr<Vector> FallbackEmbedder::EmbedTable(const Table& table) const {
  MeanVector mean(store_);
  if (table.caption.has_value()) mean.Add(*table.caption);
  for (const Column& column : table.columns) mean.Add(column.name);
  return mean.Finish(StrCat("table ", table.table_id));
}

absl::StatusOr<Vector> FallbackEmbedder::EmbedColumn(
    std::string_view tpe, const Column& column) const {
  MeanVector mean(store_);
  mean.Add(tpe);
  mean.Add(column.name);
  return mean.Finish(StrCat("column \"", column.name, "\""));
}

absl::StatusOr<TableIndex> TableIndex::Build(std::span<const Table> corpus,
                                             const Embedder& embedder,
                                             const IndexBuildOptions& options,
                                             IndexBuildReport* report) {
  std::set<std::string_view> seen;
  std::vector<std::string> duplicates;
  for (const Table& table : corpus) {
    if (!seen.insert(table.table_id).second) {
      duplicates.push_back(table.table_id);
    }
  }
  if (!duplicates.empty()) {
    return absl::InvalidArgumentError(
        StrCat("duplicate table ids in index corpus: ",
               StrJoin(duplicates, ", ")));
  }

  std::vector<absl::StatusOr<Vector>> vectors(
      corpus.size(), absl::UnknownError("not embedded"));
  const size_t threads =
      std::clamp<size_t>(static_cast<size_t>(std::max(options.threads, 1)), 1,
                         std::max<size_t>(corpus.size(), 1));
  auto work = [&](size_t worker) {
    for (size_t i = worker; i < corpus.size(); i += threads) {
      vectors[i] = embedder.EmbedTable(corpus[i]);
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (size_t w = 0; w < threads; ++w) pool.emplace_back(work, w);
  }

  TableIndex index;
  std::vector<std::string> failures;
  for (size_t i = 0; i < corpus.size(); ++i) {
    const std::string& id = corpus[i].table_id;
    if (!vectors[i].ok()) {
      failures.push_back(StrCat(id, ": ", vectors[i].status().message()));
      continue;
    }
    Vector& vector = *vectors[i];
    if (index.dims_ == 0 && !vector.empty()) {
      index.dims_ = static_cast<int>(vector.size());
    }
    const double norm = Norm(vector);
    if (vector.size() != static_cast<size_t>(index.dims_)) {
      failures.push_back(StrCat(id, ": embedding has ", vector.size(),
                                " components, expected ", index.dims_));
    } else if (norm == 0 || !std::isfinite(norm)) {
      failures.push_back(StrCat(id, ": embedding has zero or non-finite norm"));
    } else {
      index.entries_.push_back({id, std::move(vector), norm});
    }
  }
  std::sort(failures.begin(), failures.end());
  if (report != nullptr) report->failures = failures;
  if (static_cast<double>(failures.size()) >
      options.max_failure_rate * static_cast<double>(corpus.size())) {
    return absl::AbortedError(
        StrCat("index build aborted: ", failures.size(), " of ", corpus.size(),
               " tables failed to embed; first: ", failures.front()));
  }
  std::sort(index.entries_.begin(), index.entries_.end(),
            [](const Entry& a, const Entry& b) {
              return a.table_id < b.table_id;
            });
  return index;
}

std::string TableIndex::Serialize() const {
  std::string out(kMagic, sizeof(kMagic));
  PutRaw<uint32_t>(out, kVersion);
  PutRaw<uint32_t>(out, static_cast<uint32_t>(dims_));
  PutRaw<uint64_t>(out, entries_.size());
  for (const Entry& entry : entries_) {
    PutRaw<uint32_t>(out, static_cast<uint32_t>(entry.table_id.size()));
    out += entry.table_id;
    out.append(reinterpret_cast<const char*>(entry.vector.data()),
               sizeof(double) * entry.vector.size());
  }
  return out;
}

absl::StatusOr<TableIndex> TableIndex::Deserialize(std::string_view in,
                                                   std::string_view source) {
  const auto corrupt = [&](std::string_view what) {
    return absl::InvalidArgumentError(
        StrCat(source, ": corrupt table index (", what, ")"));
  };
  if (!in.starts_with(std::string_view(kMagic, sizeof(kMagic)))) {
    return corrupt("bad magic");
  }
  in.remove_prefix(sizeof(kMagic));
  uint32_t version = 0, dims = 0;
  uint64_t count = 0;
  if (!GetRaw(in, version) || !GetRaw(in, dims) || !GetRaw(in, count)) {
    return corrupt("truncated header");
  }
  if (version != kVersion) return corrupt(StrCat("unsupported version ", version));
  TableIndex index;
  index.dims_ = static_cast<int>(dims);
  for (uint64_t i = 0; i < count; ++i) {
    uint32_t id_size = 0;
    if (!GetRaw(in, id_size) || in.size() < id_size + sizeof(double) * dims) {
      return corrupt(StrCat("truncated entry ", i));
    }
    Entry entry;
    entry.table_id = std::string(in.substr(0, id_size));
    in.remove_prefix(id_size);
    entry.vector.resize(dims);
    std::memcpy(entry.vector.data(), in.data(), sizeof(double) * dims);
    in.remove_prefix(sizeof(double) * dims);
    entry.norm = Norm(entry.vector);
    if (entry.norm == 0 || !std::isfinite(entry.norm)) {
      return corrupt(StrCat("entry ", entry.table_id, " has a degenerate vector"));
    }
    if (!index.entries_.empty() &&
        index.entries_.back().table_id >= entry.table_id) {
      return corrupt(StrCat("entries out of order at ", entry.table_id));
    }
    index.entries_.push_back(std::move(entry));
  }
  if (!in.empty()) return corrupt("trailing bytes");
  return index;
}

absl::Status TableIndex::Save(const std::filesystem::path& path) const {
  return WriteFileAtomic(path, Serialize());
}

absl::StatusOr<TableIndex> TableIndex::Load(const std::filesystem::path& path) {
  auto bytes = ReadFile(path);
  if (!bytes.ok()) return bytes.status();
  return Deserialize(*bytes, path.filename().string());
}

absl::StatusOr<std::vector<ScoredTable>> TableIndex::Search(
    const Vector& query, size_t k, std::string_view exclude_id) const {
  if (query.size() != static_cast<size_t>(dims_)) {
    return absl::InvalidArgumentError(
        StrCat("query vector has ", query.size(), " components, index has ",
               dims_));
  }
  const double query_norm = Norm(query);
  if (query_norm == 0) {
    return absl::InvalidArgumentError("query vector is all zero");
  }
  std::vector<ScoredTable> scored;
  scored.reserve(entries_.size());
  for (const Entry& entry : entries_) {
    if (!exclude_id.empty() && entry.table_id == exclude_id) continue;
    scored.push_back(
        {entry.table_id,
         CosineWithNorms(query, query_norm, entry.vector, entry.norm)});
  }
  if (k == 0 || k > scored.size()) {
    return absl::InvalidArgumentError(
        StrCat("k must be in [1, ", scored.size(), "], got ", k));
  }
  std::partial_sort(scored.begin(), scored.begin() + static_cast<long>(k),
                    scored.end(), Better);
  scored.resize(k);
  return scored;
}

absl::StatusOr<std::vector<ScoredTable>> Retrieve(const TableIndex& index,
                                                  const Table& query,
                                                  const Embedder& embedder,
                                                  size_t k) {
  auto vector = embedder.EmbedTable(query);
  if (!vector.ok()) return vector.status();
  return index.Search(*vector, k, query.table_id);
}

}  // namespace cta

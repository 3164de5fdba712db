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

#ifndef CTA_RERANKER_RERANKER_H_
#define CTA_RERANKER_RERANKER_H_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "cta/embedding/embedding_store.h"
#include "cta/table/table_model.h"

namespace cta {

enum class CandidateSource { kRetrieved, kDictionary };

std::string_view CandidateSourceName(CandidateSource source);

// A column offered by a retrieved table.
struct PoolColumn {
  std::string table_id;
  Column column;
};

struct RankedCandidate {
  std::string name;
  // Empty for dictionary candidates.
  std::string source_table_id;
  ColumnType type = ColumnType::kText;
  double similarity = 0;
  CandidateSource provenance = CandidateSource::kRetrieved;

  bool operator==(const RankedCandidate&) const = default;
};

inline constexpr size_t kDefaultRerankK = 20;

// Scores every pool column by the cosine between its name's phrase vector
// and the target name's. Names are deduplicated by NameKey keeping the best
// score (ties keep the smaller source table id); the target's own name and
// fully out-of-vocabulary names are dropped. Returns at most k candidates by
// descending similarity, ties by ascending name. An empty pool gives an
// empty list; an unembeddable target is NotFound.
//
// `tpe` is accepted for contextual weighting and currently unused.
absl::StatusOr<std::vector<RankedCandidate>> Rerank(
    const Column& target, std::string_view tpe,
    std::span<const PoolColumn> pool, const EmbeddingStore& store,
    size_t k = kDefaultRerankK);

}  // namespace cta

#endif  // CTA_RERANKER_RERANKER_H_

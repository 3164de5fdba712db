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

#include "cta/reranker/reranker.h"

#include <algorithm>
#include <map>

#include "cta/common/str_cat.h"
#include "cta/common/text.h"

namespace cta {

std::string_view CandidateSourceName(CandidateSource source) {
  switch (source) {
    case CandidateSource::kRetrieved:
      return "retrieved";
    case CandidateSource::kDictionary:
      return "dictionary";
  }
  return "unknown";
}

absl::StatusOr<std::vector<RankedCandidate>> Rerank(
    const Column& target, std::string_view /*tpe*/,
    std::span<const PoolColumn> pool, const EmbeddingStore& store, size_t k) {
  const auto target_vector = store.LookupPhrase(target.name);
  if (!target_vector.has_value()) {
    return absl::NotFoundError(
        StrCat("target column \"", target.name, "\" is not embeddable"));
  }
  const double target_norm = Norm(*target_vector);
  if (target_norm == 0) {
    return absl::NotFoundError(
        StrCat("target column \"", target.name, "\" embeds to a zero vector"));
  }
  const std::string target_key = target.Key();

  std::map<std::string, RankedCandidate> best;
  std::map<std::string, double> vector_cache;
  for (const PoolColumn& item : pool) {
    std::string key = item.column.Key();
    if (key.empty() || key == target_key) continue;
    double similarity = 0;
    if (auto cached = vector_cache.find(key); cached != vector_cache.end()) {
      similarity = cached->second;
    } else {
      const auto vector = store.LookupPhrase(item.column.name);
      if (!vector.has_value()) continue;
      const double norm = Norm(*vector);
      if (norm == 0) continue;
      similarity = CosineWithNorms(*target_vector, target_norm, *vector, norm);
      vector_cache.emplace(key, similarity);
    }
    RankedCandidate candidate{
        .name = CollapseWhitespace(item.column.name),
        .source_table_id = item.table_id,
        .type = item.column.type,
        .similarity = similarity,
        .provenance = CandidateSource::kRetrieved,
    };
    auto [it, inserted] = best.emplace(std::move(key), candidate);
    if (!inserted && (candidate.similarity > it->second.similarity ||
                      (candidate.similarity == it->second.similarity &&
                       candidate.source_table_id < it->second.source_table_id))) {
      it->second = std::move(candidate);
    }
  }

  std::vector<RankedCandidate> ranked;
  ranked.reserve(best.size());
  for (auto& [key, candidate] : best) ranked.push_back(std::move(candidate));
  const auto better = [](const RankedCandidate& a, const RankedCandidate& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    if (a.name != b.name) return a.name < b.name;
    return a.source_table_id < b.source_table_id;
  };
  const size_t keep = std::min(k, ranked.size());
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<long>(keep),
                    ranked.end(), better);
  ranked.resize(keep);
  return ranked;
}

}  // namespace cta

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

#ifndef CTA_PIPELINE_PIPELINE_H_
#define CTA_PIPELINE_PIPELINE_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "cta/dict_replacer/dict_replacer.h"
#include "cta/embedding/embedding_store.h"
#include "cta/nli_gate/nli_gate.h"
#include "cta/reranker/reranker.h"
#include "cta/retriever/retriever.h"
#include "cta/sql/sql_tools.h"
#include "cta/table/dataset_io.h"
#include "cta/table/table_model.h"
#include "json.hpp"

namespace cta {

struct PipelineConfig {
  size_t k_retrieve = kDefaultRetrieveK;
  size_t k_rerank = kDefaultRerankK;
  double rpl_threshold = kDefaultRplThreshold;
  double add_threshold = kDefaultAddThreshold;
  WordLevelOptions word_level;
  uint64_t seed = 0;
  int threads = 1;
};

// Borrowed inputs; they must outlive the Pipeline. Only `scorer` is
// required. Without an index there are no retrieved candidates, and without
// a dictionary no word-level ones.
struct PipelineResources {
  const TableIndex* index = nullptr;
  // Tables behind `index`, looked up by id to build the rerank pool.
  std::span<const Table> retrieval_corpus;
  const Embedder* embedder = nullptr;
  const EmbeddingStore* store = nullptr;
  const SynonymDictionary* dictionary = nullptr;
  const NliScorer* scorer = nullptr;
  // Defaults to TpeLabelSet::Default().
  const TpeLabelSet* labels = nullptr;
};

struct Candidate {
  std::string name;
  CandidateSource provenance = CandidateSource::kRetrieved;
  // Retrieved candidates only.
  std::string source_table_id;
  // Type of the source column. RPL candidates are gated with the target's
  // type instead, since a rename keeps the column's data.
  ColumnType type = ColumnType::kText;
  std::optional<double> similarity;
  // Entailment with the target: e1 has the target as premise, e2 the
  // candidate.
  double e1 = 0;
  double e2 = 0;
  // ADD only: min over original columns of 1 - max(e1, e2).
  std::optional<double> margin;

  bool operator==(const Candidate&) const = default;
};

struct CandidateBuckets {
  std::string db_id;
  std::string table_id;
  std::string column;
  std::string tpe;
  bool tpe_predicted = false;
  std::vector<Candidate> rpl;
  std::vector<Candidate> add;
  // Stages skipped for this target and why.
  std::vector<std::string> notes;

  bool operator==(const CandidateBuckets&) const = default;
};

nlohmann::ordered_json CandidateToJson(const Candidate& candidate);
nlohmann::ordered_json BucketsToJson(const CandidateBuckets& buckets);

struct TargetRef {
  const Database* db = nullptr;
  const Table* table = nullptr;
  const Column* column = nullptr;
};

// Every column of every table, in corpus order.
std::vector<TargetRef> AllTargets(std::span<const Database> databases);

// Retrieve, rerank, merge with dictionary candidates and gate each candidate
// into the RPL or ADD bucket. Retrieved candidates are tried for RPL first
// and for ADD only when RPL rejects them; dictionary candidates are tried for
// RPL only. Candidates named like an existing column of the table are left
// out. Errors name the failing stage (tpe, retrieve, rerank, gate).
class Pipeline {
 public:
  // InvalidArgument for out-of-range settings or missing resources;
  // FailedPrecondition when an indexed table is missing from the corpus.
  static absl::StatusOr<Pipeline> Create(PipelineResources resources,
                                         PipelineConfig config);

  Pipeline(Pipeline&&);
  Pipeline& operator=(Pipeline&&);
  ~Pipeline();

  // The table's own TPE, else the zero-shot prediction (cached per table).
  absl::StatusOr<std::string> ResolveTpe(const Database& db,
                                         const Table& table,
                                         bool* predicted = nullptr) const;

  absl::StatusOr<CandidateBuckets> GenerateBuckets(const Database& db,
                                                   const Table& table,
                                                   const Column& target) const;

  // Runs targets on config().threads workers. Results are in target order
  // and do not depend on the thread count.
  std::vector<absl::StatusOr<CandidateBuckets>> GenerateAll(
      std::span<const TargetRef> targets) const;

  const PipelineConfig& config() const { return config_; }
  const NliScorer& scorer() const { return *resources_.scorer; }
  const Table* FindCorpusTable(std::string_view table_id) const;

 private:
  struct TpeCache;

  Pipeline(PipelineResources resources, PipelineConfig config);

  PipelineResources resources_;
  PipelineConfig config_;
  std::map<std::string, const Table*, std::less<>> corpus_by_id_;
  std::unique_ptr<TpeCache> tpe_cache_;
};

// Re-checks every emitted candidate against the gate criteria and the bucket
// invariants: RPL candidates pass the RPL rule, ADD candidates pass the ADD
// rule against every original column and fail the RPL rule against the
// target, the buckets share no name, and all scores lie in [0, 1].
absl::Status AuditBuckets(const CandidateBuckets& buckets, const Table& table,
                          const NliScorer& scorer,
                          const PipelineConfig& config = {});

enum class RecordKind { kOriginal, kRpl, kAdd };
std::string_view RecordKindName(RecordKind kind);

struct AppliedRename {
  std::string table_id;
  std::string from;
  Candidate candidate;
};

struct AppliedAddition {
  std::string table_id;
  // The mentioned column whose ADD bucket supplied the candidate.
  std::string target_column;
  Candidate candidate;
};

struct ProvenanceRecord {
  std::string record_id;
  std::string base_example_id;
  RecordKind kind = RecordKind::kOriginal;
  std::string db_id;
  std::vector<AppliedRename> renames;
  std::vector<AppliedAddition> additions;
  // The slot kept the original table.
  bool fallback = false;
  std::vector<std::string> notes;
};

nlohmann::ordered_json ProvenanceToJson(const ProvenanceRecord& record);

struct AugmentFailure {
  std::string example_id;
  std::string message;
};

struct AugmentSummary {
  size_t examples = 0;
  size_t records = 0;
  size_t rpl_perturbed = 0;
  size_t add_perturbed = 0;
  size_t rpl_fallbacks = 0;
  size_t add_fallbacks = 0;
  std::vector<AugmentFailure> failures;
};

nlohmann::ordered_json SummaryToJson(const AugmentSummary& summary);

struct AugmentOptions {
  // Perturbed tables get the perturbed database's id and the gold SQL is
  // repointed, as the single-table layout keys databases by table id.
  bool rename_single_tables = false;
};

struct AugmentResult {
  Corpus corpus;
  std::vector<ProvenanceRecord> provenance;
  AugmentSummary summary;
};

// Emits, per example, the original record, an RPL record (every mentioned
// column renamed to a candidate drawn uniformly from its RPL bucket, gold
// SQL rewritten) and an ADD record (one candidate per mentioned column drawn
// from its ADD bucket and appended to the table, gold SQL unchanged). A slot
// with nothing to apply, or whose ADD tables would change the query's
// bindings, keeps the original table and is noted. Examples whose gold SQL
// does not parse or resolve are reported in the summary and skipped.
// Bucket generation errors abort the run.
absl::StatusOr<AugmentResult> AugmentTraining(
    const Corpus& dataset, const Pipeline& pipeline,
    const AugmentOptions& options = {});

// Writes the augmented dataset (tables.json + examples.json for
// spider_like, dataset.json for single_table), provenance.jsonl and
// summary.json into `out_dir`.
absl::Status WriteAugmentResult(const AugmentResult& result,
                                const std::filesystem::path& out_dir,
                                DatasetFormat format);

}  // namespace cta

#endif  // CTA_PIPELINE_PIPELINE_H_

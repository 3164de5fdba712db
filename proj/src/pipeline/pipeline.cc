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

#include "cta/pipeline/pipeline.h"

#include <algorithm>
#include <atomic>
#include <mutex>
#include <set>
#include <thread>
#include <utility>

#include "cta/common/file_io.h"
#include "cta/common/rng.h"
#include "cta/common/status_macros.h"
#include "cta/common/str_cat.h"
#include "cta/common/text.h"
#include "cta/sql/printer.h"
#include "cta/sql/resolver.h"

namespace cta {
namespace {

using Json = nlohmann::ordered_json;

absl::Status StageError(std::string_view stage, const Table& table,
                        const Column& target, const absl::Status& status) {
  return absl::Status(status.code(),
                      StrCat(stage, " stage failed for ", table.table_id, ".",
                             target.name, ": ", status.message()));
}

std::string TargetKey(std::string_view db_id, std::string_view table_id,
                      std::string_view column) {
  return StrCat(NameKey(db_id), "\x1f", NameKey(table_id), "\x1f",
                NameKey(column));
}

bool InUnitInterval(double x) { return x >= 0 && x <= 1; }

}  // namespace

struct Pipeline::TpeCache {
  std::mutex mu;
  std::map<std::string, std::string> labels;
};

Pipeline::Pipeline(PipelineResources resources, PipelineConfig config)
    : resources_(resources),
      config_(std::move(config)),
      tpe_cache_(std::make_unique<TpeCache>()) {}

Pipeline::Pipeline(Pipeline&&) = default;
Pipeline& Pipeline::operator=(Pipeline&&) = default;
Pipeline::~Pipeline() = default;

absl::StatusOr<Pipeline> Pipeline::Create(PipelineResources resources,
                                          PipelineConfig config) {
  if (resources.scorer == nullptr) {
    return absl::InvalidArgumentError("pipeline needs an NLI scorer");
  }
  if (resources.index != nullptr &&
      (resources.embedder == nullptr || resources.store == nullptr)) {
    return absl::InvalidArgumentError(
        "retrieval needs both an embedder and an embedding store");
  }
  if (!InUnitInterval(config.rpl_threshold) ||
      !InUnitInterval(config.add_threshold)) {
    return absl::InvalidArgumentError(
        StrCat("thresholds must lie in [0, 1], got rpl ", config.rpl_threshold,
               " and add ", config.add_threshold));
  }
  if (config.k_retrieve == 0 || config.k_rerank == 0) {
    return absl::InvalidArgumentError("k_retrieve and k_rerank must be positive");
  }
  if (config.threads < 1) {
    return absl::InvalidArgumentError("threads must be at least 1");
  }
  if (resources.labels == nullptr) resources.labels = &TpeLabelSet::Default();
  Pipeline pipeline(resources, std::move(config));
  for (const Table& table : resources.retrieval_corpus) {
    pipeline.corpus_by_id_.emplace(table.table_id, &table);
  }
  if (resources.index != nullptr) {
    std::vector<std::string> missing;
    for (const TableIndex::Entry& entry : resources.index->entries()) {
      if (!pipeline.corpus_by_id_.contains(entry.table_id)) {
        missing.push_back(entry.table_id);
      }
    }
    if (!missing.empty()) {
      return absl::FailedPreconditionError(
          StrCat("index holds ", missing.size(),
                 " table(s) absent from the retrieval corpus, e.g. ",
                 missing.front()));
    }
  }
  return pipeline;
}

const Table* Pipeline::FindCorpusTable(std::string_view table_id) const {
  auto it = corpus_by_id_.find(table_id);
  return it == corpus_by_id_.end() ? nullptr : it->second;
}

absl::StatusOr<std::string> Pipeline::ResolveTpe(const Database& db,
                                                 const Table& table,
                                                 bool* predicted) const {
  if (predicted != nullptr) *predicted = false;
  if (table.tpe.has_value() && !IsBlank(*table.tpe)) return *table.tpe;
  if (predicted != nullptr) *predicted = true;
  const std::string key = TargetKey(db.db_id, table.table_id, "");
  {
    std::lock_guard<std::mutex> lock(tpe_cache_->mu);
    auto it = tpe_cache_->labels.find(key);
    if (it != tpe_cache_->labels.end()) return it->second;
  }
  if (table.columns.empty()) {
    return absl::FailedPreconditionError(
        StrCat("table ", table.table_id, " has no TPE and no columns"));
  }
  CTA_ASSIGN_OR_RETURN(
      TpePrediction prediction,
      ClassifyTpe(table, *resources_.labels, *resources_.scorer));
  std::lock_guard<std::mutex> lock(tpe_cache_->mu);
  tpe_cache_->labels.emplace(key, prediction.label);
  return prediction.label;
}

absl::StatusOr<CandidateBuckets> Pipeline::GenerateBuckets(
    const Database& db, const Table& table, const Column& target) const {
  if (table.FindColumn(target.name) == nullptr) {
    return absl::InvalidArgumentError(StrCat(
        "column \"", target.name, "\" is not in table ", table.table_id));
  }
  CandidateBuckets buckets{.db_id = db.db_id,
                           .table_id = table.table_id,
                           .column = target.name};
  auto tpe = ResolveTpe(db, table, &buckets.tpe_predicted);
  if (!tpe.ok()) return StageError("tpe", table, target, tpe.status());
  buckets.tpe = *tpe;

  std::set<std::string> taken;
  for (const Column& column : table.columns) taken.insert(column.Key());

  std::vector<RankedCandidate> retrieved;
  const TableIndex* index = resources_.index;
  if (index == nullptr || index->size() == 0) {
    buckets.notes.push_back("retrieval skipped: no index");
  } else {
    const bool self_indexed = corpus_by_id_.contains(table.table_id) &&
                              std::any_of(index->entries().begin(),
                                          index->entries().end(),
                                          [&](const TableIndex::Entry& e) {
                                            return e.table_id == table.table_id;
                                          });
    const size_t eligible = index->size() - (self_indexed ? 1 : 0);
    auto hits = eligible == 0
                    ? absl::StatusOr<std::vector<ScoredTable>>(
                          std::vector<ScoredTable>{})
                    : Retrieve(*index, table, *resources_.embedder,
                               std::min(config_.k_retrieve, eligible));
    if (absl::IsNotFound(hits.status())) {
      buckets.notes.push_back(
          StrCat("retrieval skipped: ", hits.status().message()));
    } else if (!hits.ok()) {
      return StageError("retrieve", table, target, hits.status());
    } else {
      std::vector<PoolColumn> pool;
      for (const ScoredTable& hit : *hits) {
        const Table* source = FindCorpusTable(hit.table_id);
        for (const Column& column : source->columns) {
          if (!taken.contains(column.Key())) {
            pool.push_back({hit.table_id, column});
          }
        }
      }
      auto ranked = Rerank(target, buckets.tpe, pool, *resources_.store,
                           config_.k_rerank);
      if (absl::IsNotFound(ranked.status())) {
        buckets.notes.push_back(
            StrCat("rerank skipped: ", ranked.status().message()));
      } else if (!ranked.ok()) {
        return StageError("rerank", table, target, ranked.status());
      } else {
        retrieved = *std::move(ranked);
      }
    }
  }

  std::vector<std::string> dictionary;
  if (resources_.dictionary != nullptr) {
    Rng rng(DeriveSeed(config_.seed, {db.db_id, table.table_id, target.name}));
    for (std::string& name : GenerateWordLevel(target, *resources_.dictionary,
                                               rng, config_.word_level)) {
      dictionary.push_back(std::move(name));
    }
  }

  const std::string target_ctx = BuildContext(buckets.tpe, target);
  std::vector<std::string> originals;
  size_t target_index = 0;
  for (size_t i = 0; i < table.columns.size(); ++i) {
    if (table.columns[i].Key() == target.Key()) target_index = i;
    originals.push_back(BuildContext(buckets.tpe, table.columns[i]));
  }
  const NliScorer& scorer = *resources_.scorer;
  const auto gate_error = [&](const absl::Status& s) {
    return StageError("gate", table, target, s);
  };

  std::set<std::string> seen = taken;
  for (const RankedCandidate& ranked : retrieved) {
    if (!seen.insert(NameKey(ranked.name)).second) continue;
    Candidate candidate{.name = ranked.name,
                        .provenance = CandidateSource::kRetrieved,
                        .source_table_id = ranked.source_table_id,
                        .type = ranked.type,
                        .similarity = ranked.similarity};
    const std::string rpl_ctx = BuildContext(
        buckets.tpe, Column{.name = ranked.name, .type = target.type});
    auto rpl = BidirectionalEntailment(target_ctx, rpl_ctx, scorer);
    if (!rpl.ok()) return gate_error(rpl.status());
    if (DecideRpl(*rpl, config_.rpl_threshold)) {
      candidate.e1 = rpl->e1;
      candidate.e2 = rpl->e2;
      buckets.rpl.push_back(std::move(candidate));
      continue;
    }
    const std::string add_ctx = BuildContext(
        buckets.tpe, Column{.name = ranked.name, .type = ranked.type});
    auto add = DecideAdd(add_ctx, originals, scorer, config_.add_threshold);
    if (!add.ok()) return gate_error(add.status());
    if (!add->accept) continue;
    // DecideAdd puts the candidate first; Candidate puts the target first.
    candidate.e1 = add->pairs[target_index].e2;
    candidate.e2 = add->pairs[target_index].e1;
    candidate.margin = add->margin;
    buckets.add.push_back(std::move(candidate));
  }
  for (const std::string& name : dictionary) {
    if (!seen.insert(NameKey(name)).second) continue;
    const std::string rpl_ctx =
        BuildContext(buckets.tpe, Column{.name = name, .type = target.type});
    auto rpl = BidirectionalEntailment(target_ctx, rpl_ctx, scorer);
    if (!rpl.ok()) return gate_error(rpl.status());
    if (!DecideRpl(*rpl, config_.rpl_threshold)) continue;
    buckets.rpl.push_back({.name = name,
                           .provenance = CandidateSource::kDictionary,
                           .type = target.type,
                           .e1 = rpl->e1,
                           .e2 = rpl->e2});
  }
  return buckets;
}

std::vector<absl::StatusOr<CandidateBuckets>> Pipeline::GenerateAll(
    std::span<const TargetRef> targets) const {
  std::vector<absl::StatusOr<CandidateBuckets>> results(
      targets.size(), absl::UnknownError("not run"));
  std::atomic<size_t> next{0};
  const auto work = [&] {
    for (size_t i = next++; i < targets.size(); i = next++) {
      const TargetRef& t = targets[i];
      results[i] = GenerateBuckets(*t.db, *t.table, *t.column);
    }
  };
  const size_t threads =
      std::min<size_t>(static_cast<size_t>(config_.threads), targets.size());
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (size_t w = 0; w < threads; ++w) pool.emplace_back(work);
  }
  return results;
}

std::vector<TargetRef> AllTargets(std::span<const Database> databases) {
  std::vector<TargetRef> out;
  for (const Database& db : databases) {
    for (const Table& table : db.tables) {
      for (const Column& column : table.columns) {
        out.push_back({&db, &table, &column});
      }
    }
  }
  return out;
}

absl::Status AuditBuckets(const CandidateBuckets& buckets, const Table& table,
                          const NliScorer& scorer,
                          const PipelineConfig& config) {
  const Column* target = table.FindColumn(buckets.column);
  if (target == nullptr) {
    return absl::InvalidArgumentError(
        StrCat("buckets name missing column ", buckets.column));
  }
  const std::string target_ctx = BuildContext(buckets.tpe, *target);
  std::vector<std::string> originals;
  for (const Column& column : table.columns) {
    originals.push_back(BuildContext(buckets.tpe, column));
  }
  const auto fail = [&](const Candidate& c, std::string_view what) {
    return absl::InternalError(StrCat("audit of ", table.table_id, ".",
                                      target->name, " candidate \"", c.name,
                                      "\": ", what));
  };
  std::set<std::string> rpl_names;
  for (const Candidate& c : buckets.rpl) {
    if (!InUnitInterval(c.e1) || !InUnitInterval(c.e2)) {
      return fail(c, "score outside [0, 1]");
    }
    rpl_names.insert(NameKey(c.name));
    CTA_ASSIGN_OR_RETURN(
        Entailment e,
        BidirectionalEntailment(
            target_ctx,
            BuildContext(buckets.tpe, {.name = c.name, .type = target->type}),
            scorer));
    if (e.e1 != c.e1 || e.e2 != c.e2) return fail(c, "recorded scores differ");
    if (!DecideRpl(e, config.rpl_threshold)) return fail(c, "fails RPL rule");
  }
  for (const Candidate& c : buckets.add) {
    if (!InUnitInterval(c.e1) || !InUnitInterval(c.e2)) {
      return fail(c, "score outside [0, 1]");
    }
    if (rpl_names.contains(NameKey(c.name))) return fail(c, "in both buckets");
    if (!c.margin.has_value()) return fail(c, "ADD candidate without margin");
    const std::string add_ctx =
        BuildContext(buckets.tpe, {.name = c.name, .type = c.type});
    CTA_ASSIGN_OR_RETURN(
        AddDecision decision,
        DecideAdd(add_ctx, originals, scorer, config.add_threshold));
    if (!decision.accept) return fail(c, "fails ADD rule");
    if (decision.margin != *c.margin) return fail(c, "recorded margin differs");
    if (DecideRpl(c.e1, c.e2, config.rpl_threshold)) {
      return fail(c, "ADD candidate could replace the target");
    }
    CTA_ASSIGN_OR_RETURN(
        Entailment e,
        BidirectionalEntailment(
            target_ctx,
            BuildContext(buckets.tpe, {.name = c.name, .type = target->type}),
            scorer));
    if (DecideRpl(e, config.rpl_threshold)) {
      return fail(c, "ADD candidate passes the RPL rule");
    }
  }
  return absl::OkStatus();
}

std::string_view RecordKindName(RecordKind kind) {
  switch (kind) {
    case RecordKind::kOriginal:
      return "original";
    case RecordKind::kRpl:
      return "rpl";
    case RecordKind::kAdd:
      return "add";
  }
  return "original";
}

Json CandidateToJson(const Candidate& candidate) {
  Json json;
  json["name"] = candidate.name;
  json["provenance"] = CandidateSourceName(candidate.provenance);
  if (!candidate.source_table_id.empty()) {
    json["source_table_id"] = candidate.source_table_id;
  }
  json["type"] = ColumnTypeName(candidate.type);
  if (candidate.similarity) json["similarity"] = *candidate.similarity;
  json["e1"] = candidate.e1;
  json["e2"] = candidate.e2;
  if (candidate.margin) json["margin"] = *candidate.margin;
  return json;
}

Json BucketsToJson(const CandidateBuckets& buckets) {
  Json json;
  json["db_id"] = buckets.db_id;
  json["table_id"] = buckets.table_id;
  json["column"] = buckets.column;
  json["tpe"] = buckets.tpe;
  json["tpe_predicted"] = buckets.tpe_predicted;
  json["rpl"] = Json::array();
  for (const Candidate& c : buckets.rpl) json["rpl"].push_back(CandidateToJson(c));
  json["add"] = Json::array();
  for (const Candidate& c : buckets.add) json["add"].push_back(CandidateToJson(c));
  json["notes"] = buckets.notes;
  return json;
}

Json ProvenanceToJson(const ProvenanceRecord& record) {
  Json json;
  json["record_id"] = record.record_id;
  json["base_example_id"] = record.base_example_id;
  json["kind"] = RecordKindName(record.kind);
  json["db_id"] = record.db_id;
  json["fallback"] = record.fallback;
  json["renames"] = Json::array();
  for (const AppliedRename& r : record.renames) {
    Json item;
    item["table_id"] = r.table_id;
    item["from"] = r.from;
    item["to"] = r.candidate.name;
    item["candidate"] = CandidateToJson(r.candidate);
    json["renames"].push_back(std::move(item));
  }
  json["additions"] = Json::array();
  for (const AppliedAddition& a : record.additions) {
    Json item;
    item["table_id"] = a.table_id;
    item["target_column"] = a.target_column;
    item["candidate"] = CandidateToJson(a.candidate);
    json["additions"].push_back(std::move(item));
  }
  json["notes"] = record.notes;
  return json;
}

Json SummaryToJson(const AugmentSummary& summary) {
  Json json;
  json["examples"] = summary.examples;
  json["records"] = summary.records;
  json["rpl_perturbed"] = summary.rpl_perturbed;
  json["add_perturbed"] = summary.add_perturbed;
  json["rpl_fallbacks"] = summary.rpl_fallbacks;
  json["add_fallbacks"] = summary.add_fallbacks;
  json["failed_examples"] = summary.failures.size();
  json["failures"] = Json::array();
  for (const AugmentFailure& f : summary.failures) {
    json["failures"].push_back(
        {{"example_id", f.example_id}, {"message", f.message}});
  }
  return json;
}

namespace {

struct ParsedExample {
  const Example* example = nullptr;
  const Database* db = nullptr;
  sql::SqlAst ast;
  std::set<sql::ColumnId> mentioned;
};

// A perturbed copy of `db` under a fresh id. With `rename_single_tables` a
// one-table database named like its table has the table renamed too and
// `gold` is repointed, which the result reports as true.
absl::StatusOr<bool> Rehome(Database& db, std::string_view new_id,
                            const AugmentOptions& options, sql::SqlAst& gold) {
  const std::string old_id = db.db_id;
  db.db_id = std::string(new_id);
  if (!options.rename_single_tables || db.tables.size() != 1 ||
      NameKey(db.tables.front().table_id) != NameKey(old_id)) {
    return false;
  }
  const std::string table_id = db.tables.front().table_id;
  CTA_ASSIGN_OR_RETURN(Database renamed, sql::RenameTable(db, table_id, new_id));
  CTA_ASSIGN_OR_RETURN(gold, sql::RewriteTable(gold, table_id, new_id, renamed));
  db = std::move(renamed);
  return true;
}

}  // namespace

absl::StatusOr<AugmentResult> AugmentTraining(const Corpus& dataset,
                                              const Pipeline& pipeline,
                                              const AugmentOptions& options) {
  AugmentResult result;
  result.corpus.databases = dataset.databases;
  result.summary.examples = dataset.examples.size();

  std::vector<ParsedExample> parsed;
  for (const Example& example : dataset.examples) {
    const Database* db = dataset.FindDatabase(example.db_id);
    if (db == nullptr) {
      result.summary.failures.push_back(
          {example.example_id, StrCat("unknown database ", example.db_id)});
      continue;
    }
    auto ast = sql::ParseAndResolve(example.gold_sql, *db);
    if (!ast.ok()) {
      result.summary.failures.push_back(
          {example.example_id, std::string(ast.status().message())});
      continue;
    }
    auto refs = sql::ExtractColumnRefs(*ast);
    if (!refs.ok()) {
      result.summary.failures.push_back(
          {example.example_id, std::string(refs.status().message())});
      continue;
    }
    parsed.push_back({&example, db, *std::move(ast), *std::move(refs)});
  }

  std::vector<TargetRef> targets;
  std::map<std::string, size_t> target_slot;
  for (const ParsedExample& p : parsed) {
    for (const sql::ColumnId& id : p.mentioned) {
      const std::string key = TargetKey(p.db->db_id, id.table_id, id.column);
      if (target_slot.contains(key)) continue;
      const Table* table = p.db->FindTable(id.table_id);
      const Column* column = table->FindColumn(id.column);
      target_slot.emplace(key, targets.size());
      targets.push_back({p.db, table, column});
    }
  }
  std::vector<absl::StatusOr<CandidateBuckets>> buckets =
      pipeline.GenerateAll(targets);
  for (const auto& b : buckets) {
    if (!b.ok()) return b.status();
  }
  const auto bucket_for = [&](const ParsedExample& p,
                              const sql::ColumnId& id) -> const CandidateBuckets& {
    return *buckets[target_slot.at(TargetKey(p.db->db_id, id.table_id, id.column))];
  };

  for (const ParsedExample& p : parsed) {
    const Example& example = *p.example;
    Rng rng(DeriveSeed(pipeline.config().seed, {example.example_id, "augment"}));

    result.corpus.examples.push_back(example);
    result.provenance.push_back({.record_id = example.example_id,
                                 .base_example_id = example.example_id,
                                 .kind = RecordKind::kOriginal,
                                 .db_id = example.db_id});

    // RPL slot.
    ProvenanceRecord rpl{.record_id = StrCat(example.example_id, "#rpl"),
                         .base_example_id = example.example_id,
                         .kind = RecordKind::kRpl,
                         .db_id = example.db_id};
    Example rpl_example = example;
    rpl_example.example_id = rpl.record_id;
    sql::ColumnMapping mapping;
    std::map<std::string, std::set<std::string>> new_names;
    for (const sql::ColumnId& id : p.mentioned) {
      std::vector<const Candidate*> options_for_column;
      for (const Candidate& c : bucket_for(p, id).rpl) {
        if (!new_names[NameKey(id.table_id)].contains(NameKey(c.name))) {
          options_for_column.push_back(&c);
        }
      }
      if (options_for_column.empty()) {
        rpl.notes.push_back(
            StrCat("no RPL candidate for ", id.table_id, ".", id.column));
        continue;
      }
      const Candidate& pick =
          *options_for_column[rng.UniformIndex(options_for_column.size())];
      new_names[NameKey(id.table_id)].insert(NameKey(pick.name));
      mapping[id] = pick.name;
      rpl.renames.push_back({id.table_id, id.column, pick});
    }
    if (p.mentioned.empty()) rpl.notes.push_back("gold SQL mentions no column");
    absl::Status rpl_status = absl::OkStatus();
    if (!mapping.empty()) {
      auto db = sql::RenameColumns(*p.db, mapping);
      auto gold = db.ok() ? sql::RewriteColumns(p.ast, mapping, *p.db)
                          : absl::StatusOr<sql::SqlAst>(db.status());
      if (gold.ok()) {
        rpl_status = Rehome(*db, StrCat(p.db->db_id, "__", rpl.record_id),
                            options, *gold)
                         .status();
      } else {
        rpl_status = gold.status();
      }
      if (rpl_status.ok()) {
        rpl.db_id = db->db_id;
        rpl_example.db_id = db->db_id;
        rpl_example.gold_sql = sql::ToSql(*gold);
        result.corpus.databases.push_back(*std::move(db));
      }
    }
    if (mapping.empty() || !rpl_status.ok()) {
      if (!rpl_status.ok()) {
        rpl.notes.push_back(StrCat("rename failed: ", rpl_status.message()));
      }
      rpl.fallback = true;
      rpl.renames.clear();
      ++result.summary.rpl_fallbacks;
    } else {
      ++result.summary.rpl_perturbed;
    }
    result.corpus.examples.push_back(std::move(rpl_example));
    result.provenance.push_back(std::move(rpl));

    // ADD slot.
    ProvenanceRecord add{.record_id = StrCat(example.example_id, "#add"),
                         .base_example_id = example.example_id,
                         .kind = RecordKind::kAdd,
                         .db_id = example.db_id};
    Example add_example = example;
    add_example.example_id = add.record_id;
    Database perturbed = *p.db;
    for (const sql::ColumnId& id : p.mentioned) {
      Table* table = perturbed.FindTable(id.table_id);
      std::vector<const Candidate*> options_for_column;
      for (const Candidate& c : bucket_for(p, id).add) {
        if (table->FindColumn(c.name) == nullptr) options_for_column.push_back(&c);
      }
      if (options_for_column.empty()) {
        add.notes.push_back(
            StrCat("no ADD candidate for ", id.table_id, ".", id.column));
        continue;
      }
      const Candidate& pick =
          *options_for_column[rng.UniformIndex(options_for_column.size())];
      Column added{.name = pick.name, .type = pick.type};
      if (const Table* source = pipeline.FindCorpusTable(pick.source_table_id)) {
        if (const Column* c = source->FindColumn(pick.name)) {
          added.cell_samples = c->cell_samples;
        }
      }
      table->columns.push_back(std::move(added));
      add.additions.push_back({id.table_id, id.column, pick});
    }
    if (p.mentioned.empty()) add.notes.push_back("gold SQL mentions no column");
    absl::Status add_status = absl::OkStatus();
    if (!add.additions.empty()) {
      auto invariant = sql::CheckAddInvariance(p.ast, *p.db, perturbed);
      if (!invariant.ok()) {
        add_status = invariant.status();
      } else if (!*invariant) {
        add_status = absl::FailedPreconditionError(
            "added columns change the gold query's bindings");
      } else {
        sql::SqlAst gold = p.ast;
        auto repointed = Rehome(
            perturbed, StrCat(p.db->db_id, "__", add.record_id), options, gold);
        add_status = repointed.status();
        if (repointed.ok()) {
          add.db_id = perturbed.db_id;
          add_example.db_id = perturbed.db_id;
          if (*repointed) add_example.gold_sql = sql::ToSql(gold);
          result.corpus.databases.push_back(std::move(perturbed));
        }
      }
    }
    if (add.additions.empty() || !add_status.ok()) {
      if (!add_status.ok()) {
        add.notes.push_back(StrCat("addition rejected: ", add_status.message()));
      }
      add.fallback = true;
      add.additions.clear();
      ++result.summary.add_fallbacks;
    } else {
      ++result.summary.add_perturbed;
    }
    result.corpus.examples.push_back(std::move(add_example));
    result.provenance.push_back(std::move(add));
  }
  result.summary.records = result.corpus.examples.size();
  return result;
}

absl::Status WriteAugmentResult(const AugmentResult& result,
                                const std::filesystem::path& out_dir,
                                DatasetFormat format) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) {
    return absl::PermissionDeniedError(
        StrCat("cannot create ", out_dir.string(), ": ", ec.message()));
  }
  CTA_RETURN_IF_ERROR(SaveDataset(result.corpus,
                                  format == DatasetFormat::kSpiderLike
                                      ? out_dir
                                      : out_dir / "dataset.json",
                                  format));
  std::string lines;
  for (const ProvenanceRecord& record : result.provenance) {
    StrAppend(&lines, ProvenanceToJson(record).dump(), "\n");
  }
  CTA_RETURN_IF_ERROR(WriteFileAtomic(out_dir / "provenance.jsonl", lines));
  return WriteFileAtomic(out_dir / "summary.json",
                         SummaryToJson(result.summary).dump(1) + "\n");
}

}  // namespace cta

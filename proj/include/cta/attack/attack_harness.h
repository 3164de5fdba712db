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

#ifndef CTA_ATTACK_ATTACK_HARNESS_H_
#define CTA_ATTACK_ATTACK_HARNESS_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "cta/table/table_model.h"
#include "json.hpp"

namespace cta {

enum class AttackKind { kRpl, kAdd };
std::string_view AttackKindName(AttackKind kind);
absl::StatusOr<AttackKind> ParseAttackKind(std::string_view name);

struct AppliedPerturbation {
  std::string table_id;
  std::string column;
  // New name (RPL) or added column (ADD).
  std::string candidate;
};

struct AttackExample {
  std::string example_id;
  // Database the adapted gold runs against; the original one when nothing
  // was perturbed.
  std::string db_id;
  std::string original_gold;
  std::string gold_sql;
  std::vector<AppliedPerturbation> applied;
  // Why parts of the example were left unperturbed.
  std::vector<std::string> flags;
};

struct AttackRun {
  AttackKind kind = AttackKind::kRpl;
  uint64_t seed = 0;
  // Perturbed databases plus every original one an example still uses.
  std::vector<Database> databases;
  std::vector<AttackExample> examples;
  // Examples whose gold SQL does not parse or resolve; not part of the run.
  std::vector<std::string> skipped;

  const Database* FindDatabase(std::string_view db_id) const;
  size_t flagged() const;
};

nlohmann::ordered_json AttackRunToJson(const AttackRun& run);
absl::StatusOr<AttackRun> AttackRunFromJson(const nlohmann::ordered_json& json,
                                            std::string_view source);
absl::Status SaveAttackRun(const AttackRun& run,
                           const std::filesystem::path& path);
absl::StatusOr<AttackRun> LoadAttackRun(const std::filesystem::path& path);

// Perturbs every column the gold SQL mentions with a candidate drawn
// uniformly from its annotation. RPL renames the column and rewrites the
// gold SQL; ADD appends the candidate to the column's table (type text) and
// keeps the gold SQL, provided the query's bindings survive. Columns with
// no usable candidate, and examples mentioning no column, stay as they are
// and are flagged. Each example draws from its own stream seeded by
// (seed, example id, kind). Annotations that do not resolve against the
// databases are FailedPrecondition.
absl::StatusOr<AttackRun> SampleAttackSet(
    const Corpus& dataset, std::span<const AdvetaAnnotation> annotations,
    AttackKind kind, uint64_t seed);

// example_id -> predicted SQL. Line-delimited JSON {"example_id", "sql"};
// a repeated example id is InvalidArgument.
using Predictions = std::map<std::string, std::string, std::less<>>;
absl::StatusOr<Predictions> ParsePredictions(std::string_view text,
                                             std::string_view source);
absl::StatusOr<Predictions> LoadPredictions(const std::filesystem::path& path);

struct EvalResult {
  AttackKind kind = AttackKind::kRpl;
  uint64_t seed = 0;
  size_t total = 0;
  size_t matched = 0;
  size_t missing = 0;
  // Exact match accuracy in percent.
  double em = 0;
  std::vector<std::string> mismatched;
};

nlohmann::ordered_json EvalResultToJson(const EvalResult& result);

// Exact match of each prediction against the run's adapted gold. Missing
// predictions count as mismatches.
absl::StatusOr<EvalResult> Evaluate(const AttackRun& run,
                                    const Predictions& predictions,
                                    int threads = 1);

enum class FluctuationMode { kRange, kStddev };

struct EvalReport {
  double dev_em = 0;
  std::vector<double> seed_ems;
  double mean = 0;
  // max - min over seeds, or the population standard deviation.
  double fluctuation = 0;
  FluctuationMode mode = FluctuationMode::kRange;
  // dev_em - mean.
  double absolute_drop = 0;
  // absolute_drop / dev_em; empty when dev_em is 0.
  std::optional<double> relative_drop;
};

// One to five seed EMs; anything else is InvalidArgument.
absl::StatusOr<EvalReport> Aggregate(double dev_em,
                                     std::span<const double> seed_ems,
                                     FluctuationMode mode = FluctuationMode::kRange);

// "-43.2 / -61.0%", or "-43.2 / n/a" when the relative drop is undefined.
std::string FormatDrop(const EvalReport& report);

nlohmann::ordered_json EvalReportToJson(const EvalReport& report);

// Fixed-width table: one row per labelled report with Dev, mean ±
// fluctuation and the drop.
std::string RenderReportTable(
    std::span<const std::pair<std::string, EvalReport>> rows);

}  // namespace cta

#endif  // CTA_ATTACK_ATTACK_HARNESS_H_

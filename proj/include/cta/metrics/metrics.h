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

#ifndef CTA_METRICS_METRICS_H_
#define CTA_METRICS_METRICS_H_

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "cta/table/table_model.h"
#include "json.hpp"

namespace cta {

struct ColumnLink {
  std::string table_id;
  std::string column;
  size_t token = 0;

  auto operator<=>(const ColumnLink&) const = default;
};

struct TableLink {
  std::string table_id;
  size_t token = 0;

  auto operator<=>(const TableLink&) const = default;
};

// Schema-element / question-token alignments of one question. Names are
// compared through NameKey.
struct LinkSet {
  std::set<ColumnLink> columns;
  std::set<TableLink> tables;
  // Number of question tokens, when known; every token index must be below.
  std::optional<size_t> question_tokens;
};

// InvalidArgument when a token index is out of range.
absl::Status ValidateLinkSet(const LinkSet& links);

struct Prf {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  // Set when the denominator was empty and the value was defined as 0.
  bool precision_undefined = false;
  bool recall_undefined = false;
  bool f1_undefined = false;
};

struct LinkingScores {
  Prf column;
  Prf table;
  // Human-readable names of the undefined metrics, e.g. "Col_P".
  std::vector<std::string> flags;
};

// Col_P/R/F over column links and Tab_P/R/F over table links.
// P = |gold ∩ pred| / |pred|, R = |gold ∩ pred| / |gold|, F their harmonic
// mean; an empty denominator gives 0 and a flag.
LinkingScores LinkingPrf(const LinkSet& gold, const LinkSet& pred);

// Pooled over questions: links are keyed by example id before counting.
// Predictions for unknown examples are FailedPrecondition; gold examples
// without a prediction count as empty predictions.
using LinkFile = std::map<std::string, LinkSet, std::less<>>;
absl::StatusOr<LinkingScores> LinkingPrf(const LinkFile& gold,
                                         const LinkFile& pred);

nlohmann::ordered_json LinkingScoresToJson(const LinkingScores& scores);

// Line-delimited JSON, one question per line:
//   {"example_id": "...", "question_tokens": 12,
//    "columns": [{"table": "students", "column": "Age", "token": 3}],
//    "tables": [{"table": "students", "token": 5}]}
// "question_tokens" is optional. Duplicate example ids and out-of-range
// tokens are InvalidArgument.
absl::StatusOr<LinkFile> ParseLinkFile(std::string_view text,
                                       std::string_view source);
absl::StatusOr<LinkFile> LoadLinkFile(const std::filesystem::path& path);

struct SplitStats {
  size_t total_tables = 0;
  // Original split only.
  std::optional<double> avg_columns_per_table;
  // Perturbed splits only: annotated columns with at least one candidate of
  // the split's kind, per table, and candidates per such column.
  std::optional<double> avg_perturbed_columns_per_table;
  std::optional<double> avg_candidates_per_column;
  // Casefolded names and whitespace-separated words.
  size_t unique_columns = 0;
  size_t unique_vocab = 0;
};

struct StatReport {
  SplitStats original;
  SplitStats rpl;
  SplitStats add;
};

struct StatOptions {
  // Count the original split's unique columns and vocab over annotated
  // columns only, instead of every column of the corpus.
  bool original_annotated_only = false;
};

// Annotations must resolve against `databases`; ones that do not are
// FailedPrecondition. The result does not depend on table order.
absl::StatusOr<StatReport> CorpusStats(
    std::span<const Database> databases,
    std::span<const AdvetaAnnotation> annotations,
    const StatOptions& options = {});

nlohmann::ordered_json StatReportToJson(const StatReport& report);

// Three columns (Orig., RPL, ADD), one row per statistic.
std::string RenderStatReport(const StatReport& report);

}  // namespace cta

#endif  // CTA_METRICS_METRICS_H_

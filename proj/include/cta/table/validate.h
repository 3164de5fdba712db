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

#ifndef CTA_TABLE_VALIDATE_H_
#define CTA_TABLE_VALIDATE_H_

#include <span>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "cta/table/table_model.h"

namespace cta {

// Rule ids reported by ValidateCorpus.
inline constexpr char kRuleNoColumns[] = "table.no_columns";
inline constexpr char kRuleEmptyColumnName[] = "table.empty_column_name";
inline constexpr char kRuleDuplicateColumn[] = "table.duplicate_column";
inline constexpr char kRuleDuplicateTable[] = "database.duplicate_table";
inline constexpr char kRuleDanglingForeignKey[] = "database.dangling_foreign_key";
inline constexpr char kRuleDuplicateDatabase[] = "corpus.duplicate_db_id";
inline constexpr char kRuleUnknownDatabase[] = "example.unknown_db";
inline constexpr char kRuleDuplicateExample[] = "example.duplicate_id";
inline constexpr char kRuleUnknownTable[] = "annotation.unknown_table";
inline constexpr char kRuleAmbiguousTable[] = "annotation.ambiguous_table";
inline constexpr char kRuleUnknownTarget[] = "annotation.unknown_column";
inline constexpr char kRuleDuplicateCandidate[] = "annotation.duplicate_candidate";
inline constexpr char kRuleSelfReplacement[] = "annotation.self_replacement";

struct Violation {
  std::string entity_id;
  std::string rule_id;
  std::string message;

  auto operator<=>(const Violation&) const = default;
};

// Checks every data-model invariant. The result is sorted and free of
// duplicates, so it does not depend on input record order. An empty result
// means the corpus is consistent.
std::vector<Violation> ValidateCorpus(
    std::span<const Database> databases, std::span<const Example> examples,
    std::span<const AdvetaAnnotation> annotations);

// Invariants an annotation must satisfy on its own (no table lookup).
std::vector<Violation> ValidateAnnotationIntrinsic(
    const AdvetaAnnotation& annotation);

// Resolves the table an annotation refers to. NotFound when absent,
// FailedPrecondition when the bare table id matches several databases.
absl::StatusOr<const Table*> ResolveAnnotationTable(
    const AdvetaAnnotation& annotation, std::span<const Database> databases);

// Folds a violation list into one error (FailedPrecondition) naming every
// offender, or OK when the list is empty.
absl::Status ViolationsToStatus(const std::vector<Violation>& violations,
                                std::string_view what);

}  // namespace cta

#endif  // CTA_TABLE_VALIDATE_H_

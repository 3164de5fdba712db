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

#include "cta/table/validate.h"

#include <algorithm>
#include <map>
#include <set>

#include "cta/common/str_cat.h"
#include "cta/common/text.h"

namespace cta {
namespace {

std::string TableEntity(const Database& db, const Table& table) {
  return StrCat(db.db_id, "/", table.table_id);
}

std::string AnnotationEntity(const AdvetaAnnotation& annotation) {
  return StrCat("annotation:", annotation.db_id.value_or(""), "/",
                      annotation.table_id, "/", annotation.target_column);
}

void ValidateTable(const Database& db, const Table& table,
                   std::vector<Violation>& out) {
  const std::string entity = TableEntity(db, table);
  if (table.columns.empty()) {
    out.push_back({entity, kRuleNoColumns, "table has no columns"});
  }
  std::map<std::string, std::string> seen;
  for (size_t i = 0; i < table.columns.size(); ++i) {
    const Column& column = table.columns[i];
    if (IsBlank(column.name)) {
      out.push_back({entity, kRuleEmptyColumnName,
                     StrCat("column #", i, " has an empty name")});
      continue;
    }
    auto [it, inserted] = seen.emplace(column.Key(), column.name);
    if (!inserted) {
      out.push_back({entity, kRuleDuplicateColumn,
                     StrCat("columns \"", it->second, "\" and \"",
                                  column.name, "\" collide")});
    }
  }
}

void ValidateDatabase(const Database& db, std::vector<Violation>& out) {
  std::set<std::string> table_keys;
  for (const Table& table : db.tables) {
    if (!table_keys.insert(NameKey(table.table_id)).second) {
      out.push_back({TableEntity(db, table), kRuleDuplicateTable,
                     "table id appears more than once"});
    }
    ValidateTable(db, table, out);
  }
  for (const ForeignKey& fk : db.foreign_keys) {
    const auto check = [&](const std::string& table_id,
                           const std::string& column) {
      const Table* table = db.FindTable(table_id);
      if (table == nullptr || table->FindColumn(column) == nullptr) {
        out.push_back({db.db_id, kRuleDanglingForeignKey,
                       StrCat("foreign key ", fk.table_id, ".",
                                    fk.column, " -> ", fk.ref_table_id, ".",
                                    fk.ref_column, " references missing ",
                                    table_id, ".", column)});
      }
    };
    check(fk.table_id, fk.column);
    check(fk.ref_table_id, fk.ref_column);
  }
}

}  // namespace

std::vector<Violation> ValidateAnnotationIntrinsic(
    const AdvetaAnnotation& annotation) {
  std::vector<Violation> out;
  const std::string entity = AnnotationEntity(annotation);
  const std::string target_key = NameKey(annotation.target_column);
  const auto check_list = [&](const std::vector<std::string>& candidates,
                              std::string_view kind) {
    std::set<std::string> seen;
    for (const std::string& candidate : candidates) {
      if (!seen.insert(NameKey(candidate)).second) {
        out.push_back({entity, kRuleDuplicateCandidate,
                       StrCat(kind, " candidate \"", candidate,
                                    "\" listed twice")});
      }
    }
  };
  check_list(annotation.rpl_candidates, "rpl");
  check_list(annotation.add_candidates, "add");
  for (const std::string& candidate : annotation.rpl_candidates) {
    if (NameKey(candidate) == target_key) {
      out.push_back({entity, kRuleSelfReplacement,
                     StrCat("rpl candidate \"", candidate,
                                  "\" equals the target column")});
    }
  }
  return out;
}

absl::StatusOr<const Table*> ResolveAnnotationTable(
    const AdvetaAnnotation& annotation, std::span<const Database> databases) {
  std::vector<const Table*> matches;
  for (const Database& db : databases) {
    if (annotation.db_id.has_value() && db.db_id != *annotation.db_id) continue;
    if (const Table* table = db.FindTable(annotation.table_id)) {
      matches.push_back(table);
    }
  }
  if (matches.empty()) {
    return absl::NotFoundError(
        StrCat("unknown table \"", annotation.table_id, "\""));
  }
  if (matches.size() > 1) {
    return absl::FailedPreconditionError(StrCat(
        "table id \"", annotation.table_id,
        "\" matches several databases; set db_id on the annotation"));
  }
  return matches.front();
}

std::vector<Violation> ValidateCorpus(
    std::span<const Database> databases, std::span<const Example> examples,
    std::span<const AdvetaAnnotation> annotations) {
  std::vector<Violation> out;
  std::set<std::string> db_ids;
  for (const Database& db : databases) {
    if (!db_ids.insert(db.db_id).second) {
      out.push_back({db.db_id, kRuleDuplicateDatabase,
                     "database id appears more than once"});
    }
    ValidateDatabase(db, out);
  }
  std::set<std::string> example_ids;
  for (const Example& example : examples) {
    if (!example_ids.insert(example.example_id).second) {
      out.push_back({example.example_id, kRuleDuplicateExample,
                     "example id appears more than once"});
    }
    if (!db_ids.contains(example.db_id)) {
      out.push_back({example.example_id, kRuleUnknownDatabase,
                     StrCat("unknown db_id \"", example.db_id, "\"")});
    }
  }
  for (const AdvetaAnnotation& annotation : annotations) {
    std::vector<Violation> intrinsic = ValidateAnnotationIntrinsic(annotation);
    out.insert(out.end(), intrinsic.begin(), intrinsic.end());
    auto table = ResolveAnnotationTable(annotation, databases);
    if (!table.ok()) {
      out.push_back({AnnotationEntity(annotation),
                     absl::IsNotFound(table.status()) ? kRuleUnknownTable
                                                      : kRuleAmbiguousTable,
                     std::string(table.status().message())});
      continue;
    }
    if ((*table)->FindColumn(annotation.target_column) == nullptr) {
      out.push_back({AnnotationEntity(annotation), kRuleUnknownTarget,
                     StrCat("table \"", annotation.table_id,
                                  "\" has no column \"",
                                  annotation.target_column, "\"")});
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

absl::Status ViolationsToStatus(const std::vector<Violation>& violations,
                                std::string_view what) {
  if (violations.empty()) return absl::OkStatus();
  std::string message = StrCat("referential error in ", what, ": ",
                                     violations.size(), " violation(s)");
  for (const Violation& v : violations) {
    StrAppend(&message, "\n  [", v.rule_id, "] ", v.entity_id, ": ",
                    v.message);
  }
  return absl::FailedPreconditionError(message);
}

}  // namespace cta

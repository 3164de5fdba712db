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

#include "cta/sql/sql_tools.h"

#include <tuple>
#include <vector>

#include "absl/status/status.h"
#include "cta/common/str_cat.h"
#include "cta/common/text.h"
#include "cta/sql/parser.h"
#include "cta/sql/printer.h"
#include "cta/sql/resolver.h"

namespace cta::sql {
namespace {

// Maps keys onto schema spelling and checks the renamed tables stay
// collision-free.
absl::StatusOr<ColumnMapping> NormalizeMapping(const ColumnMapping& mapping,
                                               const Database& db) {
  ColumnMapping out;
  for (const auto& [key, new_name] : mapping) {
    const Table* table = db.FindTable(key.table_id);
    if (table == nullptr) {
      return absl::NotFoundError(
          StrCat("rename refers to unknown table \"", key.table_id, "\""));
    }
    const Column* column = table->FindColumn(key.column);
    if (column == nullptr) {
      return absl::NotFoundError(StrCat("rename refers to unknown column \"",
                                        key.table_id, ".", key.column, "\""));
    }
    if (IsBlank(new_name)) {
      return absl::InvalidArgumentError(StrCat(
          "blank new name for \"", key.table_id, ".", key.column, "\""));
    }
    out[{table->table_id, column->name}] = new_name;
  }
  for (const Table& table : db.tables) {
    std::map<std::string, std::string> seen;
    for (const Column& column : table.columns) {
      auto it = out.find({table.table_id, column.name});
      const std::string& name = it == out.end() ? column.name : it->second;
      auto [pos, inserted] = seen.emplace(NameKey(name), column.name);
      if (!inserted) {
        return absl::AlreadyExistsError(
            StrCat("rename collision in table \"", table.table_id,
                   "\": columns \"", pos->second, "\" and \"", column.name,
                   "\" would both be named \"", name, "\""));
      }
    }
  }
  return out;
}

using ResolutionKey = std::tuple<int, std::string, std::string, int, int>;

std::vector<ResolutionKey> ResolutionSignature(const Query& query) {
  std::vector<ResolutionKey> out;
  ForEachExpr(query, [&](const Expr& e) {
    if (e.kind != ExprKind::kColumn) return;
    const ColumnResolution& r = e.resolution;
    out.emplace_back(static_cast<int>(r.kind), NameKey(r.table_id),
                     NameKey(r.column), r.from_id, r.select_index);
  });
  return out;
}

absl::Status CheckAppendOnly(const Database& base, const Database& perturbed) {
  if (base.tables.size() != perturbed.tables.size()) {
    return absl::FailedPreconditionError(
        "perturbed schema has a different set of tables");
  }
  for (size_t t = 0; t < base.tables.size(); ++t) {
    const Table& a = base.tables[t];
    const Table& b = perturbed.tables[t];
    if (NameKey(a.table_id) != NameKey(b.table_id) ||
        b.columns.size() < a.columns.size()) {
      return absl::FailedPreconditionError(StrCat(
          "table \"", b.table_id, "\" is not an extension of \"", a.table_id,
          "\""));
    }
    for (size_t c = 0; c < a.columns.size(); ++c) {
      if (a.columns[c].name != b.columns[c].name) {
        return absl::FailedPreconditionError(StrCat(
            "table \"", b.table_id, "\" changes existing column \"",
            a.columns[c].name, "\""));
      }
    }
    std::map<std::string, std::string> seen;
    for (const Column& column : b.columns) {
      auto [it, inserted] = seen.emplace(column.Key(), column.name);
      if (!inserted) {
        return absl::InvalidArgumentError(
            StrCat("table \"", b.table_id, "\" has duplicate columns \"",
                   it->second, "\" and \"", column.name, "\""));
      }
    }
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<SqlAst> RewriteColumns(const SqlAst& ast,
                                      const ColumnMapping& mapping,
                                      const Database& db) {
  auto normalized = NormalizeMapping(mapping, db);
  if (!normalized.ok()) return normalized.status();
  SqlAst out = ast;
  if (!out.resolved) {
    if (auto s = Resolve(out, db); !s.ok()) return s;
  }
  ForEachExpr(out.query, [&](Expr& e) {
    if (e.kind != ExprKind::kColumn || e.resolution.kind != RefKind::kSchema) {
      return;
    }
    auto it = normalized->find({e.resolution.table_id, e.resolution.column});
    if (it == normalized->end()) return;
    e.name = it->second;
    e.resolution.column = it->second;
  });
  return out;
}

absl::StatusOr<Database> RenameColumns(const Database& db,
                                       const ColumnMapping& mapping) {
  auto normalized = NormalizeMapping(mapping, db);
  if (!normalized.ok()) return normalized.status();
  Database out = db;
  for (Table& table : out.tables) {
    for (Column& column : table.columns) {
      auto it = normalized->find({table.table_id, column.name});
      if (it != normalized->end()) column.name = it->second;
    }
  }
  for (ForeignKey& fk : out.foreign_keys) {
    const auto rename = [&](const std::string& table_id, std::string& column) {
      const Table* table = db.FindTable(table_id);
      if (table == nullptr) return;
      const Column* c = table->FindColumn(column);
      if (c == nullptr) return;
      auto it = normalized->find({table->table_id, c->name});
      if (it != normalized->end()) column = it->second;
    };
    rename(fk.table_id, fk.column);
    rename(fk.ref_table_id, fk.ref_column);
  }
  return out;
}

absl::StatusOr<Database> RenameTable(const Database& db, std::string_view from,
                                     std::string_view to) {
  if (IsBlank(to)) return absl::InvalidArgumentError("blank table name");
  const Table* source = db.FindTable(from);
  if (source == nullptr) {
    return absl::NotFoundError(
        StrCat("database ", db.db_id, " has no table \"", from, "\""));
  }
  const Table* clash = db.FindTable(to);
  if (clash != nullptr && clash != source) {
    return absl::AlreadyExistsError(
        StrCat("database ", db.db_id, " already has a table \"", to, "\""));
  }
  const std::string key = NameKey(source->table_id);
  Database out = db;
  for (Table& table : out.tables) {
    if (NameKey(table.table_id) == key) table.table_id = std::string(to);
  }
  for (ForeignKey& fk : out.foreign_keys) {
    if (NameKey(fk.table_id) == key) fk.table_id = std::string(to);
    if (NameKey(fk.ref_table_id) == key) fk.ref_table_id = std::string(to);
  }
  return out;
}

absl::StatusOr<SqlAst> RewriteTable(const SqlAst& ast, std::string_view from,
                                    std::string_view to,
                                    const Database& renamed) {
  const std::string key = NameKey(from);
  SqlAst out = ast;
  std::set<int> unaliased;
  ForEachFromItem(out.query, [&](FromItem& item) {
    if (item.subquery || NameKey(item.table_name) != key) return;
    item.table_name = std::string(to);
    if (item.alias.empty()) unaliased.insert(item.id);
  });
  ForEachExpr(out.query, [&](Expr& e) {
    if (e.qualifier.empty() || NameKey(e.qualifier) != key) return;
    if (e.kind == ExprKind::kStar ||
        (e.kind == ExprKind::kColumn &&
         (!out.resolved || unaliased.contains(e.resolution.from_id)))) {
      e.qualifier = std::string(to);
    }
  });
  return ParseAndResolve(ToSql(out), renamed);
}

absl::StatusOr<std::set<ColumnId>> ExtractColumnRefs(const SqlAst& ast) {
  if (!ast.resolved) {
    return absl::FailedPreconditionError(
        "column extraction needs a resolved query");
  }
  std::set<ColumnId> out;
  std::vector<std::string> unresolved;
  ForEachExpr(ast.query, [&](const Expr& e) {
    if (e.kind != ExprKind::kColumn) return;
    if (e.resolution.kind == RefKind::kSchema) {
      out.insert({e.resolution.table_id, e.resolution.column});
    } else if (e.resolution.kind == RefKind::kUnresolved) {
      unresolved.push_back(e.qualifier.empty()
                               ? e.name
                               : StrCat(e.qualifier, ".", e.name));
    }
  });
  if (!unresolved.empty()) {
    return absl::FailedPreconditionError(
        StrCat("unresolved column reference(s): ", StrJoin(unresolved, ", ")));
  }
  return out;
}

absl::StatusOr<bool> CheckAddInvariance(const SqlAst& ast, const Database& base,
                                        const Database& perturbed) {
  if (auto s = CheckAppendOnly(base, perturbed); !s.ok()) return s;
  SqlAst before = ast;
  if (!before.resolved) {
    if (auto s = Resolve(before, base); !s.ok()) return s;
  }
  SqlAst after = ast;
  if (auto s = Resolve(after, perturbed); !s.ok()) {
    if (IsAmbiguityError(s)) return false;
    return s;
  }
  return ResolutionSignature(before.query) == ResolutionSignature(after.query);
}

absl::StatusOr<bool> CheckAddInvariance(const SqlAst& ast, const Database& db,
                                        const Table& perturbed) {
  Database extended = db;
  bool replaced = false;
  for (Table& table : extended.tables) {
    if (NameKey(table.table_id) == NameKey(perturbed.table_id)) {
      table = perturbed;
      replaced = true;
    }
  }
  if (!replaced) {
    return absl::FailedPreconditionError(StrCat(
        "perturbed table \"", perturbed.table_id, "\" is not in database \"",
        db.db_id, "\""));
  }
  return CheckAddInvariance(ast, db, extended);
}

absl::StatusOr<bool> ExactMatch(std::string_view predicted,
                                std::string_view gold, const Database& db) {
  auto gold_ast = ParseAndResolve(gold, db);
  if (!gold_ast.ok()) {
    return absl::InvalidArgumentError(
        StrCat("gold query: ", gold_ast.status().message()));
  }
  auto gold_canonical = Canonicalize(*gold_ast);
  if (!gold_canonical.ok()) return gold_canonical.status();
  auto pred_ast = ParseAndResolve(predicted, db);
  if (!pred_ast.ok()) return false;
  auto pred_canonical = Canonicalize(*pred_ast);
  if (!pred_canonical.ok()) return false;
  return *pred_canonical == *gold_canonical;
}

}  // namespace cta::sql

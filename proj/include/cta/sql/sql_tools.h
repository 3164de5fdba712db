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

#ifndef CTA_SQL_SQL_TOOLS_H_
#define CTA_SQL_SQL_TOOLS_H_

#include <compare>
#include <map>
#include <set>
#include <string>
#include <string_view>

#include "absl/status/statusor.h"
#include "cta/sql/ast.h"
#include "cta/table/table_model.h"

namespace cta::sql {

// A schema column, spelled as in the schema.
struct ColumnId {
  std::string table_id;
  std::string column;

  auto operator<=>(const ColumnId&) const = default;
};

// (table, old column name) -> new column name. Keys are matched against the
// schema case-insensitively.
using ColumnMapping = std::map<ColumnId, std::string>;

// Normal form used for exact-match comparison. Keywords and identifiers are
// case-folded, FROM items are renamed positionally per select (t1, t2, ...;
// nested selects get a depth prefix such as t1_1), every bound reference is
// written as alias.column, top-level select aliases are dropped, `<>` becomes
// `!=`, ORDER BY directions are explicit, AND/OR operands and the operands
// of =, !=, + and * are sorted. Literals are kept verbatim.
struct CanonicalSql {
  Query query;
  std::string text;

  bool operator==(const CanonicalSql& other) const {
    return text == other.text;
  }
};

// Requires a resolved AST (FailedPrecondition otherwise).
absl::StatusOr<CanonicalSql> Canonicalize(const SqlAst& ast);

// Renames schema columns referenced by `ast`. The result is bound against
// the renamed schema. NotFound for a mapping key outside `db`,
// InvalidArgument for a blank new name, AlreadyExists when renaming would
// make two columns of one table collide.
absl::StatusOr<SqlAst> RewriteColumns(const SqlAst& ast,
                                      const ColumnMapping& mapping,
                                      const Database& db);

// Applies the same renaming to the schema, foreign keys included.
absl::StatusOr<Database> RenameColumns(const Database& db,
                                       const ColumnMapping& mapping);

// Renames one table of the schema, foreign keys included. NotFound when
// `from` is absent, AlreadyExists when `to` names another table.
absl::StatusOr<Database> RenameTable(const Database& db, std::string_view from,
                                     std::string_view to);

// Points FROM items naming `from` at `to`, along with qualifiers that spell
// the table name, and resolves the result against `renamed`.
absl::StatusOr<SqlAst> RewriteTable(const SqlAst& ast, std::string_view from,
                                    std::string_view to,
                                    const Database& renamed);

// Every schema column the query reads. FailedPrecondition if the AST is not
// resolved or holds an unresolved reference.
absl::StatusOr<std::set<ColumnId>> ExtractColumnRefs(const SqlAst& ast);

// True when every reference in `ast` binds to the same column after the
// schema gains appended columns, and no reference becomes ambiguous.
// `perturbed` must equal `base` with columns appended to some tables;
// anything else is FailedPrecondition, and duplicate column names in
// `perturbed` are InvalidArgument.
absl::StatusOr<bool> CheckAddInvariance(const SqlAst& ast, const Database& base,
                                        const Database& perturbed);

// Single-table form: `perturbed` replaces the table of `db` with the same id.
absl::StatusOr<bool> CheckAddInvariance(const SqlAst& ast, const Database& db,
                                        const Table& perturbed);

// Canonical-form equality. An unparsable or unresolvable prediction is a
// mismatch; an unparsable or unresolvable gold query is an error.
absl::StatusOr<bool> ExactMatch(std::string_view predicted,
                                std::string_view gold, const Database& db);

}  // namespace cta::sql

#endif  // CTA_SQL_SQL_TOOLS_H_

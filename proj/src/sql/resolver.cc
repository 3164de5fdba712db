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

#include "cta/sql/resolver.h"

#include <vector>

#include "absl/strings/match.h"
#include "cta/common/str_cat.h"
#include "cta/common/text.h"
#include "cta/sql/parser.h"

namespace cta::sql {
namespace {

constexpr std::string_view kAmbiguousPrefix = "ambiguous column reference";

struct OutputColumn {
  std::string name;
  ColumnResolution resolution;
};

struct ScopeItem {
  const FromItem* item = nullptr;
  const Table* table = nullptr;
  std::vector<OutputColumn> derived;

  bool Matches(std::string_view qualifier_key) const {
    if (!item->alias.empty()) return NameKey(item->alias) == qualifier_key;
    return !item->table_name.empty() &&
           NameKey(item->table_name) == qualifier_key;
  }
};

struct Scope {
  const Scope* outer = nullptr;
  const Select* select = nullptr;
  std::vector<ScopeItem> items;
};

std::string RefText(const Expr& expr) {
  return expr.qualifier.empty() ? expr.name
                                : StrCat(expr.qualifier, ".", expr.name);
}

class Resolver {
 public:
  explicit Resolver(const Database& db) : db_(db) {}

  absl::Status ResolveQuery(Query& query, const Scope* outer,
                            std::vector<OutputColumn>* outputs) {
    for (Query* q = &query; q != nullptr; q = q->rhs.get()) {
      if (auto s = ResolveSelect(q->select, outer, q == &query ? outputs : nullptr);
          !s.ok()) {
        return s;
      }
    }
    return absl::OkStatus();
  }

 private:
  absl::Status ResolveSelect(Select& select, const Scope* outer,
                             std::vector<OutputColumn>* outputs) {
    Scope scope;
    scope.outer = outer;
    scope.select = &select;
    for (FromItem& item : select.from) {
      item.id = next_from_id_++;
      ScopeItem entry;
      entry.item = &item;
      if (item.subquery) {
        if (auto s = ResolveQuery(*item.subquery, outer, &entry.derived);
            !s.ok()) {
          return s;
        }
        for (OutputColumn& column : entry.derived) {
          column.resolution.from_id = item.id;
        }
      } else {
        const Table* table = db_.FindTable(item.table_name);
        if (table == nullptr) {
          return absl::NotFoundError(StrCat("unknown table \"", item.table_name,
                                            "\" in database \"", db_.db_id,
                                            "\""));
        }
        item.table_id = table->table_id;
        entry.table = table;
      }
      scope.items.push_back(std::move(entry));
    }
    for (FromItem& item : select.from) {
      if (item.on.has_value()) {
        if (auto s = ResolveExpr(*item.on, scope, false, false); !s.ok()) {
          return s;
        }
      }
    }
    for (SelectItem& item : select.items) {
      if (auto s = ResolveExpr(item.expr, scope, false, false); !s.ok()) {
        return s;
      }
    }
    if (select.where.has_value()) {
      if (auto s = ResolveExpr(*select.where, scope, false, false); !s.ok()) {
        return s;
      }
    }
    for (Expr& e : select.group_by) {
      if (auto s = ResolveExpr(e, scope, true, false); !s.ok()) return s;
    }
    if (select.having.has_value()) {
      if (auto s = ResolveExpr(*select.having, scope, true, false); !s.ok()) {
        return s;
      }
    }
    for (OrderItem& o : select.order_by) {
      if (auto s = ResolveExpr(o.expr, scope, true, false); !s.ok()) return s;
    }
    if (outputs != nullptr) CollectOutputs(select, scope, *outputs);
    return absl::OkStatus();
  }

  static void AppendItemColumns(const ScopeItem& entry,
                                std::vector<OutputColumn>& out) {
    if (entry.table != nullptr) {
      for (const Column& column : entry.table->columns) {
        out.push_back({column.name,
                       {RefKind::kSchema, entry.table->table_id, column.name,
                        entry.item->id, -1}});
      }
    } else {
      out.insert(out.end(), entry.derived.begin(), entry.derived.end());
    }
  }

  static void CollectOutputs(const Select& select, const Scope& scope,
                             std::vector<OutputColumn>& out) {
    for (const SelectItem& item : select.items) {
      const Expr& e = item.expr;
      if (e.kind == ExprKind::kStar) {
        const std::string key = NameKey(e.qualifier);
        for (const ScopeItem& entry : scope.items) {
          if (e.qualifier.empty() || entry.Matches(key)) {
            AppendItemColumns(entry, out);
          }
        }
        continue;
      }
      if (item.alias.empty() && e.kind == ExprKind::kColumn) {
        out.push_back({e.name, e.resolution});
        continue;
      }
      OutputColumn column;
      column.name = item.alias;
      column.resolution.kind = RefKind::kDerived;
      column.resolution.column = item.alias;
      out.push_back(std::move(column));
    }
  }

  // Looks a column up among the FROM items of one scope. Returns false
  // when nothing matched.
  absl::StatusOr<bool> LookupInScope(const Expr& expr, const Scope& scope,
                                     ColumnResolution& out) const {
    const std::string qualifier_key = NameKey(expr.qualifier);
    const std::string name_key = NameKey(expr.name);
    std::vector<ColumnResolution> matches;
    std::vector<std::string> owners;
    bool qualifier_found = false;
    for (const ScopeItem& entry : scope.items) {
      if (!expr.qualifier.empty()) {
        if (!entry.Matches(qualifier_key)) continue;
        qualifier_found = true;
      }
      if (entry.table != nullptr) {
        if (const Column* column = entry.table->FindColumn(expr.name)) {
          matches.push_back({RefKind::kSchema, entry.table->table_id,
                             column->name, entry.item->id, -1});
          owners.push_back(entry.table->table_id);
        }
      } else {
        for (const OutputColumn& column : entry.derived) {
          if (NameKey(column.name) == name_key) {
            matches.push_back(column.resolution);
            owners.push_back(entry.item->alias.empty() ? "(subquery)"
                                                       : entry.item->alias);
            break;
          }
        }
      }
    }
    if (matches.size() > 1) {
      return absl::FailedPreconditionError(
          StrCat(kAmbiguousPrefix, " \"", RefText(expr), "\": matches ",
                 StrJoin(owners, ", ")));
    }
    if (matches.size() == 1) {
      out = matches.front();
      return true;
    }
    // A known qualifier with an unknown column stops the outward search.
    if (qualifier_found) {
      out = ColumnResolution();
      return true;
    }
    return false;
  }

  absl::Status ResolveColumn(Expr& expr, const Scope& scope,
                             bool allow_alias) const {
    expr.resolution = ColumnResolution();
    auto local = LookupInScope(expr, scope, expr.resolution);
    if (!local.ok()) return local.status();
    if (*local) return absl::OkStatus();
    if (allow_alias && expr.qualifier.empty()) {
      const std::string key = NameKey(expr.name);
      const auto& items = scope.select->items;
      for (size_t i = 0; i < items.size(); ++i) {
        if (!items[i].alias.empty() && NameKey(items[i].alias) == key) {
          expr.resolution.kind = RefKind::kSelectAlias;
          expr.resolution.column = items[i].alias;
          expr.resolution.select_index = static_cast<int>(i);
          return absl::OkStatus();
        }
      }
    }
    for (const Scope* s = scope.outer; s != nullptr; s = s->outer) {
      auto found = LookupInScope(expr, *s, expr.resolution);
      if (!found.ok()) return found.status();
      if (*found) return absl::OkStatus();
    }
    return absl::OkStatus();
  }

  absl::Status ResolveExpr(Expr& expr, const Scope& scope, bool allow_alias,
                           bool in_aggregate) {
    switch (expr.kind) {
      case ExprKind::kColumn:
        return ResolveColumn(expr, scope, allow_alias);
      case ExprKind::kStar:
        expr.resolution = ColumnResolution();
        if (!expr.qualifier.empty()) {
          const std::string key = NameKey(expr.qualifier);
          for (const ScopeItem& entry : scope.items) {
            if (entry.Matches(key)) {
              expr.resolution.from_id = entry.item->id;
              break;
            }
          }
        }
        return absl::OkStatus();
      case ExprKind::kFunction:
        if (IsAggregateName(expr.op)) {
          if (in_aggregate) {
            return absl::InvalidArgumentError(
                StrCat("nested aggregate ", expr.op, "(...)"));
          }
          in_aggregate = true;
        }
        break;
      default:
        break;
    }
    for (Expr& arg : expr.args) {
      if (auto s = ResolveExpr(arg, scope, allow_alias, in_aggregate);
          !s.ok()) {
        return s;
      }
    }
    if (expr.subquery) return ResolveQuery(*expr.subquery, &scope, nullptr);
    return absl::OkStatus();
  }

  const Database& db_;
  int next_from_id_ = 0;
};

}  // namespace

absl::Status Resolve(SqlAst& ast, const Database& db) {
  ast.resolved = false;
  ForEachExpr(ast.query, [](Expr& e) { e.resolution = ColumnResolution(); });
  ForEachFromItem(ast.query, [](FromItem& item) {
    item.table_id.clear();
    item.id = -1;
  });
  if (auto s = Resolver(db).ResolveQuery(ast.query, nullptr, nullptr);
      !s.ok()) {
    return s;
  }
  ast.resolved = true;
  return absl::OkStatus();
}

absl::StatusOr<SqlAst> ParseAndResolve(std::string_view sql,
                                       const Database& db) {
  auto ast = ParseSql(sql);
  if (!ast.ok()) return ast.status();
  if (auto s = Resolve(*ast, db); !s.ok()) return s;
  return ast;
}

bool IsAmbiguityError(const absl::Status& status) {
  return absl::IsFailedPrecondition(status) &&
         absl::StartsWith(status.message(), absl::string_view(kAmbiguousPrefix.data(), kAmbiguousPrefix.size()));
}

}  // namespace cta::sql

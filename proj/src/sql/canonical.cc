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

#include <algorithm>
#include <map>

#include "absl/status/status.h"
#include "cta/common/str_cat.h"
#include "cta/common/text.h"
#include "cta/sql/printer.h"
#include "cta/sql/sql_tools.h"

namespace cta::sql {
namespace {

constexpr PrintOptions kCanonicalPrint{.lowercase_keywords = true};

bool IsCommutative(std::string_view op) {
  return op == "=" || op == "!=" || op == "+" || op == "*";
}

class Canonicalizer {
 public:
  void Run(Query& query) {
    Assign(query, 0);
    TransformQuery(query, /*keep_aliases=*/false);
  }

 private:
  static std::string AliasName(int depth, int n) {
    return depth == 0 ? StrCat("t", n) : StrCat("t", depth, "_", n);
  }

  void Assign(Query& query, int depth) {
    for (Query* q = &query; q != nullptr; q = q->rhs.get()) {
      Select& select = q->select;
      int n = 1;
      for (FromItem& item : select.from) {
        aliases_[item.id] = AliasName(depth, n++);
      }
      for (FromItem& item : select.from) {
        if (item.subquery) Assign(*item.subquery, depth + 1);
        if (item.on.has_value()) AssignInExpr(*item.on, depth + 1);
      }
      for (SelectItem& item : select.items) AssignInExpr(item.expr, depth + 1);
      if (select.where.has_value()) AssignInExpr(*select.where, depth + 1);
      for (Expr& e : select.group_by) AssignInExpr(e, depth + 1);
      if (select.having.has_value()) AssignInExpr(*select.having, depth + 1);
      for (OrderItem& o : select.order_by) AssignInExpr(o.expr, depth + 1);
    }
  }

  void AssignInExpr(Expr& e, int depth) {
    for (Expr& arg : e.args) AssignInExpr(arg, depth);
    if (e.subquery) Assign(*e.subquery, depth);
  }

  // Replaces select-list alias references by the aliased expression.
  // Subqueries own their aliases and are left alone.
  static void SubstituteAliases(Expr& e, const Select& select) {
    if (e.kind == ExprKind::kColumn &&
        e.resolution.kind == RefKind::kSelectAlias &&
        e.resolution.select_index >= 0 &&
        static_cast<size_t>(e.resolution.select_index) < select.items.size()) {
      e = select.items[e.resolution.select_index].expr;
      return;
    }
    for (Expr& arg : e.args) SubstituteAliases(arg, select);
  }

  std::string AliasFor(int from_id) const {
    auto it = aliases_.find(from_id);
    return it == aliases_.end() ? "" : it->second;
  }

  void TransformQuery(Query& query, bool keep_aliases) {
    for (Query* q = &query; q != nullptr; q = q->rhs.get()) {
      TransformSelect(q->select, keep_aliases);
    }
  }

  void TransformSelect(Select& select, bool keep_aliases) {
    for (Expr& e : select.group_by) SubstituteAliases(e, select);
    if (select.having.has_value()) SubstituteAliases(*select.having, select);
    for (OrderItem& o : select.order_by) SubstituteAliases(o.expr, select);

    for (FromItem& item : select.from) {
      item.alias = AliasFor(item.id);
      if (item.subquery) {
        TransformQuery(*item.subquery, /*keep_aliases=*/true);
      } else {
        item.table_name = NameKey(item.table_id);
      }
      if (item.on.has_value()) Canon(*item.on);
    }
    for (SelectItem& item : select.items) {
      Canon(item.expr);
      item.alias = keep_aliases ? NameKey(item.alias) : "";
    }
    if (select.where.has_value()) Canon(*select.where);
    for (Expr& e : select.group_by) Canon(e);
    if (select.having.has_value()) Canon(*select.having);
    for (OrderItem& o : select.order_by) {
      Canon(o.expr);
      o.explicit_direction = true;
    }
  }

  static void SortOperands(std::vector<Expr>& args) {
    std::vector<std::pair<std::string, Expr>> keyed;
    keyed.reserve(args.size());
    for (Expr& arg : args) {
      keyed.emplace_back(ExprToSql(arg, kCanonicalPrint), std::move(arg));
    }
    std::stable_sort(keyed.begin(), keyed.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    args.clear();
    for (auto& [key, arg] : keyed) args.push_back(std::move(arg));
  }

  void Canon(Expr& e) {
    for (Expr& arg : e.args) Canon(arg);
    if (e.subquery) TransformQuery(*e.subquery, /*keep_aliases=*/false);
    switch (e.kind) {
      case ExprKind::kColumn:
        if (e.resolution.kind == RefKind::kSchema ||
            e.resolution.kind == RefKind::kDerived) {
          e.qualifier = AliasFor(e.resolution.from_id);
          e.name = NameKey(e.resolution.column);
        } else {
          e.qualifier = NameKey(e.qualifier);
          e.name = NameKey(e.name);
        }
        break;
      case ExprKind::kStar:
        e.qualifier = e.resolution.from_id >= 0 ? AliasFor(e.resolution.from_id)
                                                : NameKey(e.qualifier);
        break;
      case ExprKind::kFunction:
        e.op = CaseFold(e.op);
        break;
      case ExprKind::kLiteral:
        if (e.literal_kind == LiteralKind::kString) e.quote = '\'';
        break;
      case ExprKind::kBinary:
        if (e.op == "<>") e.op = "!=";
        if (IsCommutative(e.op)) SortOperands(e.args);
        break;
      case ExprKind::kLogical: {
        std::vector<Expr> flat;
        for (Expr& arg : e.args) {
          if (arg.kind == ExprKind::kLogical && arg.op == e.op) {
            for (Expr& inner : arg.args) flat.push_back(std::move(inner));
          } else {
            flat.push_back(std::move(arg));
          }
        }
        e.args = std::move(flat);
        SortOperands(e.args);
        break;
      }
      default:
        break;
    }
  }

  std::map<int, std::string> aliases_;
};

}  // namespace

absl::StatusOr<CanonicalSql> Canonicalize(const SqlAst& ast) {
  if (!ast.resolved) {
    return absl::FailedPreconditionError(
        "canonicalization needs a resolved query");
  }
  CanonicalSql out;
  out.query = ast.query;
  Canonicalizer().Run(out.query);
  out.text = QueryToSql(out.query, kCanonicalPrint);
  return out;
}

}  // namespace cta::sql

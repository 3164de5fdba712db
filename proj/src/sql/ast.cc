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

#include "cta/sql/ast.h"

#include "cta/common/text.h"

namespace cta::sql {
namespace {

template <typename QueryT, typename ExprT, typename Fn>
void VisitExpr(ExprT& expr, const Fn& fn);

template <typename QueryT, typename ExprT, typename Fn>
void VisitQuery(QueryT& query, const Fn& fn) {
  for (QueryT* q = &query; q != nullptr; q = q->rhs.get()) {
    auto& select = q->select;
    for (auto& item : select.items) VisitExpr<QueryT, ExprT>(item.expr, fn);
    for (auto& from : select.from) {
      if (from.subquery) VisitQuery<QueryT, ExprT>(*from.subquery, fn);
      if (from.on.has_value()) VisitExpr<QueryT, ExprT>(*from.on, fn);
    }
    if (select.where.has_value()) VisitExpr<QueryT, ExprT>(*select.where, fn);
    for (auto& e : select.group_by) VisitExpr<QueryT, ExprT>(e, fn);
    if (select.having.has_value()) VisitExpr<QueryT, ExprT>(*select.having, fn);
    for (auto& o : select.order_by) VisitExpr<QueryT, ExprT>(o.expr, fn);
  }
}

template <typename QueryT, typename ExprT, typename Fn>
void VisitExpr(ExprT& expr, const Fn& fn) {
  fn(expr);
  for (auto& arg : expr.args) VisitExpr<QueryT, ExprT>(arg, fn);
  if (expr.subquery) VisitQuery<QueryT, ExprT>(*expr.subquery, fn);
}

void VisitFrom(Query& query, const std::function<void(FromItem&)>& fn);

void VisitFromInExpr(Expr& expr, const std::function<void(FromItem&)>& fn) {
  for (Expr& arg : expr.args) VisitFromInExpr(arg, fn);
  if (expr.subquery) VisitFrom(*expr.subquery, fn);
}

void VisitFrom(Query& query, const std::function<void(FromItem&)>& fn) {
  for (Query* q = &query; q != nullptr; q = q->rhs.get()) {
    Select& select = q->select;
    for (FromItem& from : select.from) {
      fn(from);
      if (from.subquery) VisitFrom(*from.subquery, fn);
      if (from.on.has_value()) VisitFromInExpr(*from.on, fn);
    }
    for (SelectItem& item : select.items) VisitFromInExpr(item.expr, fn);
    if (select.where.has_value()) VisitFromInExpr(*select.where, fn);
    for (Expr& e : select.group_by) VisitFromInExpr(e, fn);
    if (select.having.has_value()) VisitFromInExpr(*select.having, fn);
    for (OrderItem& o : select.order_by) VisitFromInExpr(o.expr, fn);
  }
}

}  // namespace

void ForEachExpr(Query& query, const std::function<void(Expr&)>& fn) {
  VisitQuery<Query, Expr>(query, fn);
}

void ForEachExpr(const Query& query,
                 const std::function<void(const Expr&)>& fn) {
  VisitQuery<const Query, const Expr>(query, fn);
}

void ForEachFromItem(Query& query, const std::function<void(FromItem&)>& fn) {
  VisitFrom(query, fn);
}

bool IsAggregateName(std::string_view function_name) {
  const std::string key = CaseFold(function_name);
  return key == "count" || key == "sum" || key == "avg" || key == "min" ||
         key == "max";
}

}  // namespace cta::sql

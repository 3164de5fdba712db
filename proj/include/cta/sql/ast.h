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

#ifndef CTA_SQL_AST_H_
#define CTA_SQL_AST_H_

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cta::sql {

// Heap-allocated value with deep-copy semantics; lets the recursive AST
// keep value semantics.
template <typename T>
class Box {
 public:
  Box() = default;
  explicit Box(T value) : ptr_(std::make_unique<T>(std::move(value))) {}
  Box(const Box& other)
      : ptr_(other.ptr_ ? std::make_unique<T>(*other.ptr_) : nullptr) {}
  Box(Box&&) noexcept = default;
  Box& operator=(const Box& other) {
    if (this != &other) {
      ptr_ = other.ptr_ ? std::make_unique<T>(*other.ptr_) : nullptr;
    }
    return *this;
  }
  Box& operator=(Box&&) noexcept = default;

  explicit operator bool() const { return ptr_ != nullptr; }
  T& operator*() { return *ptr_; }
  const T& operator*() const { return *ptr_; }
  T* operator->() { return ptr_.get(); }
  const T* operator->() const { return ptr_.get(); }
  T* get() { return ptr_.get(); }
  const T* get() const { return ptr_.get(); }

 private:
  std::unique_ptr<T> ptr_;
};

struct Query;

enum class ExprKind {
  kColumn,
  kStar,      // `*` or `alias.*` inside a select list or COUNT(*)
  kLiteral,
  kUnary,     // op: "-" or "NOT"
  kBinary,    // op: comparison, arithmetic, LIKE
  kLogical,   // op: "AND" / "OR", n-ary
  kIn,        // args[0] IN (args[1..]) or IN (subquery)
  kBetween,   // args[0] BETWEEN args[1] AND args[2]
  kIsNull,    // args[0] IS [NOT] NULL
  kFunction,  // op: function name as written
  kSubquery,  // scalar subquery
  kExists,
};

enum class LiteralKind { kNumber, kString, kNull, kBoolean };

// How a column reference was bound.
enum class RefKind {
  kUnresolved,
  kSchema,       // a base-table column in the database schema
  kDerived,      // an aliased output column of a derived table
  kSelectAlias,  // an alias of the enclosing select list (ORDER BY cnt)
};

struct ColumnResolution {
  RefKind kind = RefKind::kUnresolved;
  // kSchema: schema table id and column name (schema spelling).
  // kDerived: empty table id and the derived output name.
  std::string table_id;
  std::string column;
  // FROM item that bound the reference (see FromItem::id).
  int from_id = -1;
  // kSelectAlias: index into the owning select list.
  int select_index = -1;

  bool operator==(const ColumnResolution&) const = default;
};

struct Expr {
  ExprKind kind = ExprKind::kLiteral;
  // Operator or function name.
  std::string op;
  // kColumn / kStar.
  std::string qualifier;
  std::string name;
  ColumnResolution resolution;
  // kLiteral. For strings `literal` holds the unescaped content.
  LiteralKind literal_kind = LiteralKind::kNumber;
  std::string literal;
  char quote = '\'';
  // COUNT(DISTINCT x).
  bool distinct = false;
  // NOT IN, NOT LIKE, NOT BETWEEN, IS NOT NULL, NOT EXISTS.
  bool negated = false;
  std::vector<Expr> args;
  // kSubquery, kExists and subquery-valued kIn.
  Box<Query> subquery;
};

enum class JoinKind { kFirst, kComma, kJoin, kInner, kLeft, kRight, kCross };

struct FromItem {
  JoinKind join = JoinKind::kFirst;
  // Base table as written; empty for a derived table.
  std::string table_name;
  Box<Query> subquery;
  std::string alias;
  std::optional<Expr> on;
  // Filled by resolution.
  std::string table_id;
  int id = -1;
};

struct SelectItem {
  Expr expr;
  std::string alias;
};

struct OrderItem {
  Expr expr;
  bool descending = false;
  bool explicit_direction = false;
};

struct Select {
  bool distinct = false;
  std::vector<SelectItem> items;
  std::vector<FromItem> from;
  std::optional<Expr> where;
  std::vector<Expr> group_by;
  std::optional<Expr> having;
  std::vector<OrderItem> order_by;
  std::optional<std::string> limit;
};

enum class SetOp { kNone, kUnion, kUnionAll, kIntersect, kExcept };

// A select followed by an optional right-nested set operation, the shape
// Spider's evaluation tooling uses.
struct Query {
  Select select;
  SetOp set_op = SetOp::kNone;
  Box<Query> rhs;
};

// A parsed statement. `resolved` is set once references are bound against a
// schema.
struct SqlAst {
  Query query;
  bool resolved = false;
};

// Calls `fn` on every expression node, pre-order, including expressions in
// nested queries and join conditions.
void ForEachExpr(Query& query, const std::function<void(Expr&)>& fn);
void ForEachExpr(const Query& query,
                 const std::function<void(const Expr&)>& fn);

// Calls `fn` on every FROM item, including those of nested queries.
void ForEachFromItem(Query& query, const std::function<void(FromItem&)>& fn);

bool IsAggregateName(std::string_view function_name);

}  // namespace cta::sql

#endif  // CTA_SQL_AST_H_

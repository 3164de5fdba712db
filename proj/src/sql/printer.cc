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

#include "cta/sql/printer.h"

#include <cctype>

#include "cta/common/str_cat.h"
#include "cta/common/text.h"
#include "cta/sql/parser.h"

namespace cta::sql {
namespace {

constexpr int kPrecOr = 1;
constexpr int kPrecAnd = 2;
constexpr int kPrecNot = 3;
constexpr int kPrecCompare = 4;
constexpr int kPrecAdd = 5;
constexpr int kPrecMul = 6;
constexpr int kPrecNegate = 7;
constexpr int kPrecAtom = 8;

int Precedence(const Expr& e) {
  switch (e.kind) {
    case ExprKind::kLogical:
      return e.op == "OR" ? kPrecOr : kPrecAnd;
    case ExprKind::kUnary:
      return e.op == "NOT" ? kPrecNot : kPrecNegate;
    case ExprKind::kBinary:
      if (e.op == "+" || e.op == "-" || e.op == "||") return kPrecAdd;
      if (e.op == "*" || e.op == "/" || e.op == "%") return kPrecMul;
      return kPrecCompare;
    case ExprKind::kIn:
    case ExprKind::kBetween:
    case ExprKind::kIsNull:
      return kPrecCompare;
    default:
      return kPrecAtom;
  }
}

class Printer {
 public:
  explicit Printer(const PrintOptions& options) : options_(options) {}

  std::string Keyword(std::string_view word) const {
    std::string out(word);
    for (char& c : out) {
      c = static_cast<char>(options_.lowercase_keywords ? std::tolower(c)
                                                        : std::toupper(c));
    }
    return out;
  }

  void Query(const sql::Query& query, std::string& out) const {
    Select(query.select, out);
    if (query.set_op == SetOp::kNone || !query.rhs) return;
    switch (query.set_op) {
      case SetOp::kUnion:
        StrAppend(&out, " ", Keyword("union"), " ");
        break;
      case SetOp::kUnionAll:
        StrAppend(&out, " ", Keyword("union all"), " ");
        break;
      case SetOp::kIntersect:
        StrAppend(&out, " ", Keyword("intersect"), " ");
        break;
      case SetOp::kExcept:
        StrAppend(&out, " ", Keyword("except"), " ");
        break;
      case SetOp::kNone:
        break;
    }
    Query(*query.rhs, out);
  }

  void Select(const sql::Select& select, std::string& out) const {
    out += Keyword("select");
    if (select.distinct) StrAppend(&out, " ", Keyword("distinct"));
    for (size_t i = 0; i < select.items.size(); ++i) {
      out += i == 0 ? " " : ", ";
      Expr(select.items[i].expr, 1, out);
      if (!select.items[i].alias.empty()) {
        StrAppend(&out, " ", Keyword("as"), " ",
                  QuoteIdentifier(select.items[i].alias));
      }
    }
    if (!select.from.empty()) {
      StrAppend(&out, " ", Keyword("from"), " ");
      for (const FromItem& item : select.from) From(item, out);
    }
    if (select.where.has_value()) {
      StrAppend(&out, " ", Keyword("where"), " ");
      Expr(*select.where, 1, out);
    }
    if (!select.group_by.empty()) {
      StrAppend(&out, " ", Keyword("group by"), " ");
      for (size_t i = 0; i < select.group_by.size(); ++i) {
        if (i > 0) out += ", ";
        Expr(select.group_by[i], 1, out);
      }
    }
    if (select.having.has_value()) {
      StrAppend(&out, " ", Keyword("having"), " ");
      Expr(*select.having, 1, out);
    }
    if (!select.order_by.empty()) {
      StrAppend(&out, " ", Keyword("order by"), " ");
      for (size_t i = 0; i < select.order_by.size(); ++i) {
        const OrderItem& item = select.order_by[i];
        if (i > 0) out += ", ";
        Expr(item.expr, 1, out);
        if (item.explicit_direction || item.descending) {
          StrAppend(&out, " ", Keyword(item.descending ? "desc" : "asc"));
        }
      }
    }
    if (select.limit.has_value()) {
      StrAppend(&out, " ", Keyword("limit"), " ", *select.limit);
    }
  }

  void From(const FromItem& item, std::string& out) const {
    switch (item.join) {
      case JoinKind::kFirst:
        break;
      case JoinKind::kComma:
        out += ", ";
        break;
      case JoinKind::kJoin:
        StrAppend(&out, " ", Keyword("join"), " ");
        break;
      case JoinKind::kInner:
        StrAppend(&out, " ", Keyword("inner join"), " ");
        break;
      case JoinKind::kLeft:
        StrAppend(&out, " ", Keyword("left join"), " ");
        break;
      case JoinKind::kRight:
        StrAppend(&out, " ", Keyword("right join"), " ");
        break;
      case JoinKind::kCross:
        StrAppend(&out, " ", Keyword("cross join"), " ");
        break;
    }
    if (item.subquery) {
      out += "(";
      Query(*item.subquery, out);
      out += ")";
    } else {
      out += QuoteIdentifier(item.table_name);
    }
    if (!item.alias.empty()) {
      StrAppend(&out, " ", Keyword("as"), " ", QuoteIdentifier(item.alias));
    }
    if (item.on.has_value()) {
      StrAppend(&out, " ", Keyword("on"), " ");
      Expr(*item.on, 1, out);
    }
  }

  void Literal(const sql::Expr& e, std::string& out) const {
    switch (e.literal_kind) {
      case LiteralKind::kNumber:
        out += e.literal;
        return;
      case LiteralKind::kNull:
      case LiteralKind::kBoolean:
        out += Keyword(e.literal);
        return;
      case LiteralKind::kString:
        out += e.quote;
        for (char c : e.literal) {
          out += c;
          if (c == e.quote) out += c;
        }
        out += e.quote;
        return;
    }
  }

  void Expr(const sql::Expr& e, int min_prec, std::string& out) const {
    const int prec = Precedence(e);
    const bool parens = prec < min_prec;
    if (parens) out += "(";
    switch (e.kind) {
      case ExprKind::kColumn:
        if (!e.qualifier.empty()) {
          StrAppend(&out, QuoteIdentifier(e.qualifier), ".");
        }
        out += QuoteIdentifier(e.name);
        break;
      case ExprKind::kStar:
        if (!e.qualifier.empty()) {
          StrAppend(&out, QuoteIdentifier(e.qualifier), ".");
        }
        out += "*";
        break;
      case ExprKind::kLiteral:
        Literal(e, out);
        break;
      case ExprKind::kUnary:
        if (e.op == "NOT") {
          StrAppend(&out, Keyword("not"), " ");
          Expr(e.args[0], kPrecNot, out);
        } else {
          out += "-";
          Expr(e.args[0],
               e.args[0].kind == ExprKind::kUnary ? kPrecAtom : kPrecNegate,
               out);
        }
        break;
      case ExprKind::kLogical:
        for (size_t i = 0; i < e.args.size(); ++i) {
          if (i > 0) StrAppend(&out, " ", Keyword(e.op), " ");
          Expr(e.args[i], prec + 1, out);
        }
        break;
      case ExprKind::kBinary: {
        const bool comparison = prec == kPrecCompare;
        Expr(e.args[0], comparison ? kPrecAdd : prec, out);
        std::string op = e.op;
        if (op == "LIKE") {
          op = e.negated ? StrCat(Keyword("not"), " ", Keyword("like"))
                         : Keyword("like");
        }
        StrAppend(&out, " ", op, " ");
        Expr(e.args[1], comparison ? kPrecAdd : prec + 1, out);
        break;
      }
      case ExprKind::kIn:
        Expr(e.args[0], kPrecAdd, out);
        StrAppend(&out, " ", e.negated ? StrCat(Keyword("not"), " ") : "",
                  Keyword("in"), " (");
        if (e.subquery) {
          Query(*e.subquery, out);
        } else {
          for (size_t i = 1; i < e.args.size(); ++i) {
            if (i > 1) out += ", ";
            Expr(e.args[i], 1, out);
          }
        }
        out += ")";
        break;
      case ExprKind::kBetween:
        Expr(e.args[0], kPrecAdd, out);
        StrAppend(&out, " ", e.negated ? StrCat(Keyword("not"), " ") : "",
                  Keyword("between"), " ");
        Expr(e.args[1], kPrecAdd, out);
        StrAppend(&out, " ", Keyword("and"), " ");
        Expr(e.args[2], kPrecAdd, out);
        break;
      case ExprKind::kIsNull:
        Expr(e.args[0], kPrecAdd, out);
        StrAppend(&out, " ", Keyword("is"), " ",
                  e.negated ? StrCat(Keyword("not"), " ") : "",
                  Keyword("null"));
        break;
      case ExprKind::kFunction:
        StrAppend(&out, e.op, "(");
        if (e.distinct) StrAppend(&out, Keyword("distinct"), " ");
        for (size_t i = 0; i < e.args.size(); ++i) {
          if (i > 0) out += ", ";
          Expr(e.args[i], 1, out);
        }
        out += ")";
        break;
      case ExprKind::kSubquery:
        out += "(";
        Query(*e.subquery, out);
        out += ")";
        break;
      case ExprKind::kExists:
        if (e.negated) StrAppend(&out, Keyword("not"), " ");
        StrAppend(&out, Keyword("exists"), " (");
        Query(*e.subquery, out);
        out += ")";
        break;
    }
    if (parens) out += ")";
  }

 private:
  const PrintOptions& options_;
};

}  // namespace

std::string QuoteIdentifier(std::string_view name) {
  bool plain = !name.empty() && !std::isdigit(static_cast<unsigned char>(name[0]));
  for (char c : name) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') plain = false;
  }
  if (plain && !IsReservedWord(name)) return std::string(name);
  std::string out = "`";
  for (char c : name) {
    out += c;
    if (c == '`') out += '`';
  }
  out += '`';
  return out;
}

std::string ToSql(const SqlAst& ast, const PrintOptions& options) {
  return QueryToSql(ast.query, options);
}

std::string QueryToSql(const Query& query, const PrintOptions& options) {
  std::string out;
  Printer(options).Query(query, out);
  return out;
}

std::string ExprToSql(const Expr& expr, const PrintOptions& options) {
  std::string out;
  Printer(options).Expr(expr, 1, out);
  return out;
}

}  // namespace cta::sql

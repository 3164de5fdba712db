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

#include "cta/sql/parser.h"

#include <array>
#include <cctype>

#include "absl/status/status.h"
#include "cta/common/str_cat.h"
#include "cta/common/text.h"

namespace cta::sql {
namespace {

constexpr std::array<std::string_view, 36> kReserved = {
    "select", "from",   "where",     "group",  "by",      "having",
    "order",  "limit",  "union",     "intersect", "except", "all",
    "distinct", "as",   "join",      "inner",  "left",    "right",
    "outer",  "cross",  "on",        "and",    "or",      "not",
    "in",     "like",   "between",   "is",     "null",    "exists",
    "asc",    "desc",   "natural",   "using",  "true",    "false"};

bool IsIdentStart(unsigned char c) {
  return std::isalpha(c) || c == '_' || c >= 0x80;
}

bool IsIdentChar(unsigned char c) {
  return std::isalnum(c) || c == '_' || c == '$' || c >= 0x80;
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  absl::StatusOr<std::vector<Token>> Run() {
    std::vector<Token> out;
    while (true) {
      SkipSpaceAndComments();
      Token token;
      token.offset = pos_;
      token.line = line_;
      token.column = column_;
      if (pos_ >= text_.size()) {
        out.push_back(std::move(token));
        return out;
      }
      const unsigned char c = text_[pos_];
      if (IsIdentStart(c)) {
        token.kind = TokenKind::kIdent;
        size_t end = pos_;
        while (end < text_.size() &&
               IsIdentChar(static_cast<unsigned char>(text_[end]))) {
          ++end;
        }
        token.text = std::string(text_.substr(pos_, end - pos_));
        Advance(end - pos_);
      } else if (std::isdigit(c) ||
                 (c == '.' && pos_ + 1 < text_.size() &&
                  std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
        token.kind = TokenKind::kNumber;
        token.text = LexNumber();
      } else if (c == '\'' || c == '"') {
        token.kind = TokenKind::kString;
        token.quote = static_cast<char>(c);
        auto content = LexQuoted(static_cast<char>(c), static_cast<char>(c));
        if (!content.ok()) return content.status();
        token.text = *std::move(content);
      } else if (c == '`' || c == '[') {
        token.kind = TokenKind::kQuotedIdent;
        token.quote = static_cast<char>(c);
        auto content =
            LexQuoted(static_cast<char>(c), c == '`' ? '`' : ']');
        if (!content.ok()) return content.status();
        token.text = *std::move(content);
      } else {
        token.kind = TokenKind::kSymbol;
        static constexpr std::array<std::string_view, 7> kTwoChar = {
            "<=", ">=", "!=", "<>", "==", "||", "::"};
        std::string_view rest = text_.substr(pos_);
        for (std::string_view op : kTwoChar) {
          if (rest.starts_with(op)) token.text = std::string(op);
        }
        if (token.text.empty()) {
          if (std::string_view("(),.*+-/%=<>;").find(static_cast<char>(c)) ==
              std::string_view::npos) {
            return Error(StrCat("unexpected character '",
                                std::string(1, static_cast<char>(c)), "'"));
          }
          token.text = std::string(1, static_cast<char>(c));
        }
        Advance(token.text.size());
      }
      out.push_back(std::move(token));
    }
  }

 private:
  void Advance(size_t n) {
    for (size_t i = 0; i < n && pos_ < text_.size(); ++i, ++pos_) {
      if (text_[pos_] == '\n') {
        ++line_;
        column_ = 1;
      } else {
        ++column_;
      }
    }
  }

  void SkipSpaceAndComments() {
    while (pos_ < text_.size()) {
      if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        Advance(1);
      } else if (text_.substr(pos_).starts_with("--")) {
        while (pos_ < text_.size() && text_[pos_] != '\n') Advance(1);
      } else {
        return;
      }
    }
  }

  std::string LexNumber() {
    const size_t start = pos_;
    size_t end = pos_;
    const auto digits = [&] {
      while (end < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[end]))) {
        ++end;
      }
    };
    digits();
    if (end < text_.size() && text_[end] == '.') {
      ++end;
      digits();
    }
    if (end < text_.size() && (text_[end] == 'e' || text_[end] == 'E')) {
      size_t exp = end + 1;
      if (exp < text_.size() && (text_[exp] == '+' || text_[exp] == '-')) {
        ++exp;
      }
      if (exp < text_.size() &&
          std::isdigit(static_cast<unsigned char>(text_[exp]))) {
        end = exp;
        digits();
      }
    }
    Advance(end - start);
    return std::string(text_.substr(start, end - start));
  }

  // Reads a delimited token; a doubled closing delimiter escapes itself.
  absl::StatusOr<std::string> LexQuoted(char open, char close) {
    const int line = line_;
    const int column = column_;
    const size_t offset = pos_;
    Advance(1);
    std::string content;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == close) {
        if (pos_ + 1 < text_.size() && text_[pos_ + 1] == close) {
          content.push_back(close);
          Advance(2);
          continue;
        }
        Advance(1);
        return content;
      }
      content.push_back(c);
      Advance(1);
    }
    return absl::InvalidArgumentError(
        StrCat("SQL parse error at line ", line, ", column ", column,
               " (offset ", offset, "): unterminated ", std::string(1, open),
               " quote"));
  }

  absl::Status Error(std::string_view message) const {
    return absl::InvalidArgumentError(StrCat("SQL parse error at line ", line_,
                                             ", column ", column_, " (offset ",
                                             pos_, "): ", message));
  }

  std::string_view text_;
  size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  absl::StatusOr<SqlAst> Run() {
    SqlAst ast;
    auto query = ParseQuery();
    if (!query.ok()) return query.status();
    ast.query = *std::move(query);
    while (AcceptSymbol(";")) {
    }
    if (Peek().kind != TokenKind::kEnd) return Unexpected("end of statement");
    return ast;
  }

 private:
  const Token& Peek(size_t ahead = 0) const {
    const size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[i];
  }

  bool PeekKeyword(std::string_view word, size_t ahead = 0) const {
    const Token& t = Peek(ahead);
    return t.kind == TokenKind::kIdent && CaseFold(t.text) == word;
  }

  bool PeekSymbol(std::string_view symbol, size_t ahead = 0) const {
    const Token& t = Peek(ahead);
    return t.kind == TokenKind::kSymbol && t.text == symbol;
  }

  bool AcceptKeyword(std::string_view word) {
    if (!PeekKeyword(word)) return false;
    ++pos_;
    return true;
  }

  bool AcceptSymbol(std::string_view symbol) {
    if (!PeekSymbol(symbol)) return false;
    ++pos_;
    return true;
  }

  absl::Status Unexpected(std::string_view expected) const {
    const Token& t = Peek();
    std::string got;
    switch (t.kind) {
      case TokenKind::kEnd:
        got = "end of input";
        break;
      case TokenKind::kString:
        got = StrCat("string '", t.text, "'");
        break;
      default:
        got = StrCat("'", t.text, "'");
    }
    return absl::InvalidArgumentError(
        StrCat("SQL parse error at line ", t.line, ", column ", t.column,
               " (offset ", t.offset, "): expected ", expected, ", got ", got));
  }

  absl::Status ExpectKeyword(std::string_view word) {
    if (AcceptKeyword(word)) return absl::OkStatus();
    std::string upper(word);
    for (char& c : upper) c = static_cast<char>(std::toupper(c));
    return Unexpected(upper);
  }

  absl::Status ExpectSymbol(std::string_view symbol) {
    if (AcceptSymbol(symbol)) return absl::OkStatus();
    return Unexpected(StrCat("'", symbol, "'"));
  }

  bool PeekIdentifier(size_t ahead = 0) const {
    const Token& t = Peek(ahead);
    return t.kind == TokenKind::kQuotedIdent ||
           (t.kind == TokenKind::kIdent && !IsReservedWord(t.text));
  }

  absl::StatusOr<std::string> ParseIdentifier(std::string_view what) {
    if (!PeekIdentifier()) return Unexpected(what);
    return tokens_[pos_++].text;
  }

  bool PeekQueryStart() const {
    return PeekKeyword("select") ||
           (PeekSymbol("(") && PeekKeyword("select", 1));
  }

  absl::StatusOr<Query> ParseQuery() {
    Query query;
    // A parenthesised whole query, as in `(SELECT ...) UNION (SELECT ...)`.
    if (PeekSymbol("(") && PeekKeyword("select", 1)) {
      ++pos_;
      auto inner = ParseQuery();
      if (!inner.ok()) return inner.status();
      if (auto s = ExpectSymbol(")"); !s.ok()) return s;
      query = *std::move(inner);
      if (query.set_op != SetOp::kNone) return query;
    } else {
      auto select = ParseSelect();
      if (!select.ok()) return select.status();
      query.select = *std::move(select);
    }
    SetOp op = SetOp::kNone;
    if (AcceptKeyword("union")) {
      op = AcceptKeyword("all") ? SetOp::kUnionAll : SetOp::kUnion;
    } else if (AcceptKeyword("intersect")) {
      op = SetOp::kIntersect;
    } else if (AcceptKeyword("except")) {
      op = SetOp::kExcept;
    }
    if (op != SetOp::kNone) {
      auto rhs = ParseQuery();
      if (!rhs.ok()) return rhs.status();
      query.set_op = op;
      query.rhs = Box<Query>(*std::move(rhs));
    }
    return query;
  }

  absl::StatusOr<Select> ParseSelect() {
    Select select;
    if (auto s = ExpectKeyword("select"); !s.ok()) return s;
    if (AcceptKeyword("distinct")) {
      select.distinct = true;
    } else {
      AcceptKeyword("all");
    }
    do {
      auto item = ParseSelectItem();
      if (!item.ok()) return item.status();
      select.items.push_back(*std::move(item));
    } while (AcceptSymbol(","));
    if (AcceptKeyword("from")) {
      if (auto s = ParseFrom(select.from); !s.ok()) return s;
    }
    if (AcceptKeyword("where")) {
      auto where = ParseExpr();
      if (!where.ok()) return where.status();
      select.where = *std::move(where);
    }
    if (AcceptKeyword("group")) {
      if (auto s = ExpectKeyword("by"); !s.ok()) return s;
      do {
        auto e = ParseExpr();
        if (!e.ok()) return e.status();
        select.group_by.push_back(*std::move(e));
      } while (AcceptSymbol(","));
    }
    if (AcceptKeyword("having")) {
      auto having = ParseExpr();
      if (!having.ok()) return having.status();
      select.having = *std::move(having);
    }
    if (AcceptKeyword("order")) {
      if (auto s = ExpectKeyword("by"); !s.ok()) return s;
      do {
        OrderItem item;
        auto e = ParseExpr();
        if (!e.ok()) return e.status();
        item.expr = *std::move(e);
        if (AcceptKeyword("asc")) {
          item.explicit_direction = true;
        } else if (AcceptKeyword("desc")) {
          item.descending = true;
          item.explicit_direction = true;
        }
        select.order_by.push_back(std::move(item));
      } while (AcceptSymbol(","));
    }
    if (AcceptKeyword("limit")) {
      if (Peek().kind != TokenKind::kNumber) return Unexpected("a number");
      select.limit = tokens_[pos_++].text;
    }
    return select;
  }

  absl::StatusOr<SelectItem> ParseSelectItem() {
    SelectItem item;
    if (PeekSymbol("*")) {
      ++pos_;
      item.expr.kind = ExprKind::kStar;
      return item;
    }
    if (PeekIdentifier() && PeekSymbol(".", 1) && PeekSymbol("*", 2)) {
      item.expr.kind = ExprKind::kStar;
      item.expr.qualifier = tokens_[pos_].text;
      pos_ += 3;
      return item;
    }
    auto expr = ParseExpr();
    if (!expr.ok()) return expr.status();
    item.expr = *std::move(expr);
    if (AcceptKeyword("as")) {
      auto alias = ParseAliasName();
      if (!alias.ok()) return alias.status();
      item.alias = *std::move(alias);
    } else if (PeekIdentifier() || Peek().kind == TokenKind::kString) {
      item.alias = tokens_[pos_++].text;
    }
    return item;
  }

  absl::StatusOr<std::string> ParseAliasName() {
    if (Peek().kind == TokenKind::kString) return tokens_[pos_++].text;
    return ParseIdentifier("an alias");
  }

  absl::Status ParseFrom(std::vector<FromItem>& out) {
    JoinKind join = JoinKind::kFirst;
    while (true) {
      auto item = ParseFromItem();
      if (!item.ok()) return item.status();
      item->join = join;
      if (join != JoinKind::kFirst && join != JoinKind::kComma &&
          join != JoinKind::kCross && AcceptKeyword("on")) {
        auto on = ParseExpr();
        if (!on.ok()) return on.status();
        item->on = *std::move(on);
      }
      out.push_back(*std::move(item));
      if (AcceptSymbol(",")) {
        join = JoinKind::kComma;
      } else if (AcceptKeyword("join")) {
        join = JoinKind::kJoin;
      } else if (AcceptKeyword("inner")) {
        if (auto s = ExpectKeyword("join"); !s.ok()) return s;
        join = JoinKind::kInner;
      } else if (PeekKeyword("left") || PeekKeyword("right")) {
        join = PeekKeyword("left") ? JoinKind::kLeft : JoinKind::kRight;
        ++pos_;
        AcceptKeyword("outer");
        if (auto s = ExpectKeyword("join"); !s.ok()) return s;
      } else if (AcceptKeyword("cross")) {
        if (auto s = ExpectKeyword("join"); !s.ok()) return s;
        join = JoinKind::kCross;
      } else {
        return absl::OkStatus();
      }
    }
  }

  absl::StatusOr<FromItem> ParseFromItem() {
    FromItem item;
    if (AcceptSymbol("(")) {
      auto sub = ParseQuery();
      if (!sub.ok()) return sub.status();
      if (auto s = ExpectSymbol(")"); !s.ok()) return s;
      item.subquery = Box<Query>(*std::move(sub));
    } else {
      auto name = ParseIdentifier("a table name");
      if (!name.ok()) return name.status();
      item.table_name = *std::move(name);
    }
    if (AcceptKeyword("as")) {
      auto alias = ParseIdentifier("an alias");
      if (!alias.ok()) return alias.status();
      item.alias = *std::move(alias);
    } else if (PeekIdentifier()) {
      item.alias = tokens_[pos_++].text;
    }
    return item;
  }

  absl::StatusOr<Expr> ParseExpr() { return ParseOr(); }

  absl::StatusOr<Expr> ParseLogical(std::string_view word, bool is_or) {
    auto first = is_or ? ParseLogical("and", false) : ParseNot();
    if (!first.ok()) return first;
    if (!PeekKeyword(word)) return first;
    Expr node;
    node.kind = ExprKind::kLogical;
    node.op = is_or ? "OR" : "AND";
    node.args.push_back(*std::move(first));
    while (AcceptKeyword(word)) {
      auto next = is_or ? ParseLogical("and", false) : ParseNot();
      if (!next.ok()) return next;
      node.args.push_back(*std::move(next));
    }
    return node;
  }

  absl::StatusOr<Expr> ParseOr() { return ParseLogical("or", true); }

  absl::StatusOr<Expr> ParseNot() {
    if (PeekKeyword("not") && !PeekKeyword("exists", 1)) {
      ++pos_;
      auto operand = ParseNot();
      if (!operand.ok()) return operand;
      Expr node;
      node.kind = ExprKind::kUnary;
      node.op = "NOT";
      node.args.push_back(*std::move(operand));
      return node;
    }
    return ParsePredicate();
  }

  absl::StatusOr<Expr> ParsePredicate() {
    auto lhs = ParseAdditive();
    if (!lhs.ok()) return lhs;
    static constexpr std::array<std::string_view, 8> kComparisons = {
        "=", "==", "!=", "<>", "<", ">", "<=", ">="};
    for (std::string_view op : kComparisons) {
      if (PeekSymbol(op)) {
        ++pos_;
        auto rhs = ParseAdditive();
        if (!rhs.ok()) return rhs;
        return Binary(op == "==" ? "=" : std::string(op), *std::move(lhs),
                      *std::move(rhs));
      }
    }
    const bool negated = PeekKeyword("not") &&
                         (PeekKeyword("in", 1) || PeekKeyword("like", 1) ||
                          PeekKeyword("between", 1));
    if (negated) ++pos_;
    if (AcceptKeyword("like")) {
      auto rhs = ParseAdditive();
      if (!rhs.ok()) return rhs;
      Expr node = Binary("LIKE", *std::move(lhs), *std::move(rhs));
      node.negated = negated;
      return node;
    }
    if (AcceptKeyword("between")) {
      auto low = ParseAdditive();
      if (!low.ok()) return low;
      if (auto s = ExpectKeyword("and"); !s.ok()) return s;
      auto high = ParseAdditive();
      if (!high.ok()) return high;
      Expr node;
      node.kind = ExprKind::kBetween;
      node.negated = negated;
      node.args.push_back(*std::move(lhs));
      node.args.push_back(*std::move(low));
      node.args.push_back(*std::move(high));
      return node;
    }
    if (AcceptKeyword("in")) {
      Expr node;
      node.kind = ExprKind::kIn;
      node.negated = negated;
      node.args.push_back(*std::move(lhs));
      if (auto s = ExpectSymbol("("); !s.ok()) return s;
      if (PeekKeyword("select")) {
        auto sub = ParseQuery();
        if (!sub.ok()) return sub.status();
        node.subquery = Box<Query>(*std::move(sub));
      } else {
        do {
          auto item = ParseExpr();
          if (!item.ok()) return item;
          node.args.push_back(*std::move(item));
        } while (AcceptSymbol(","));
      }
      if (auto s = ExpectSymbol(")"); !s.ok()) return s;
      return node;
    }
    if (negated) return Unexpected("IN, LIKE or BETWEEN");
    if (AcceptKeyword("is")) {
      Expr node;
      node.kind = ExprKind::kIsNull;
      node.negated = AcceptKeyword("not");
      if (auto s = ExpectKeyword("null"); !s.ok()) return s;
      node.args.push_back(*std::move(lhs));
      return node;
    }
    return lhs;
  }

  static Expr Binary(std::string op, Expr lhs, Expr rhs) {
    Expr node;
    node.kind = ExprKind::kBinary;
    node.op = std::move(op);
    node.args.push_back(std::move(lhs));
    node.args.push_back(std::move(rhs));
    return node;
  }

  absl::StatusOr<Expr> ParseAdditive() {
    auto lhs = ParseMultiplicative();
    if (!lhs.ok()) return lhs;
    Expr acc = *std::move(lhs);
    while (PeekSymbol("+") || PeekSymbol("-") || PeekSymbol("||")) {
      std::string op = tokens_[pos_++].text;
      auto rhs = ParseMultiplicative();
      if (!rhs.ok()) return rhs;
      acc = Binary(std::move(op), std::move(acc), *std::move(rhs));
    }
    return acc;
  }

  absl::StatusOr<Expr> ParseMultiplicative() {
    auto lhs = ParseUnary();
    if (!lhs.ok()) return lhs;
    Expr acc = *std::move(lhs);
    while (PeekSymbol("*") || PeekSymbol("/") || PeekSymbol("%")) {
      std::string op = tokens_[pos_++].text;
      auto rhs = ParseUnary();
      if (!rhs.ok()) return rhs;
      acc = Binary(std::move(op), std::move(acc), *std::move(rhs));
    }
    return acc;
  }

  absl::StatusOr<Expr> ParseUnary() {
    if (PeekSymbol("-") || PeekSymbol("+")) {
      const std::string op = tokens_[pos_++].text;
      auto operand = ParseUnary();
      if (!operand.ok()) return operand;
      if (op == "+") return operand;
      Expr node;
      node.kind = ExprKind::kUnary;
      node.op = "-";
      node.args.push_back(*std::move(operand));
      return node;
    }
    return ParsePrimary();
  }

  absl::StatusOr<Expr> ParsePrimary() {
    const Token& t = Peek();
    Expr node;
    if (t.kind == TokenKind::kNumber) {
      node.kind = ExprKind::kLiteral;
      node.literal_kind = LiteralKind::kNumber;
      node.literal = t.text;
      ++pos_;
      return node;
    }
    if (t.kind == TokenKind::kString) {
      node.kind = ExprKind::kLiteral;
      node.literal_kind = LiteralKind::kString;
      node.literal = t.text;
      node.quote = t.quote;
      ++pos_;
      return node;
    }
    if (PeekKeyword("null") || PeekKeyword("true") || PeekKeyword("false")) {
      node.kind = ExprKind::kLiteral;
      node.literal_kind =
          PeekKeyword("null") ? LiteralKind::kNull : LiteralKind::kBoolean;
      node.literal = CaseFold(t.text);
      ++pos_;
      return node;
    }
    if (PeekKeyword("exists") || (PeekKeyword("not") && PeekKeyword("exists", 1))) {
      node.kind = ExprKind::kExists;
      node.negated = AcceptKeyword("not");
      ++pos_;
      if (auto s = ExpectSymbol("("); !s.ok()) return s;
      auto sub = ParseQuery();
      if (!sub.ok()) return sub.status();
      if (auto s = ExpectSymbol(")"); !s.ok()) return s;
      node.subquery = Box<Query>(*std::move(sub));
      return node;
    }
    if (PeekSymbol("(")) {
      if (PeekKeyword("select", 1)) {
        ++pos_;
        auto sub = ParseQuery();
        if (!sub.ok()) return sub.status();
        if (auto s = ExpectSymbol(")"); !s.ok()) return s;
        node.kind = ExprKind::kSubquery;
        node.subquery = Box<Query>(*std::move(sub));
        return node;
      }
      ++pos_;
      auto inner = ParseExpr();
      if (!inner.ok()) return inner;
      if (auto s = ExpectSymbol(")"); !s.ok()) return s;
      return inner;
    }
    if (t.kind == TokenKind::kIdent && PeekSymbol("(", 1) &&
        !IsReservedWord(t.text)) {
      node.kind = ExprKind::kFunction;
      node.op = t.text;
      pos_ += 2;
      if (AcceptSymbol(")")) return node;
      if (AcceptKeyword("distinct")) node.distinct = true;
      if (PeekSymbol("*") && PeekSymbol(")", 1)) {
        ++pos_;
        Expr star;
        star.kind = ExprKind::kStar;
        node.args.push_back(std::move(star));
      } else {
        do {
          auto arg = ParseExpr();
          if (!arg.ok()) return arg;
          node.args.push_back(*std::move(arg));
        } while (AcceptSymbol(","));
      }
      if (auto s = ExpectSymbol(")"); !s.ok()) return s;
      return node;
    }
    if (PeekIdentifier()) {
      node.kind = ExprKind::kColumn;
      node.name = tokens_[pos_++].text;
      if (AcceptSymbol(".")) {
        auto column = ParseIdentifier("a column name");
        if (!column.ok()) return column.status();
        node.qualifier = std::move(node.name);
        node.name = *std::move(column);
      }
      return node;
    }
    return Unexpected("an expression");
  }

  std::vector<Token> tokens_;
  size_t pos_ = 0;
};

}  // namespace

bool IsReservedWord(std::string_view word) {
  const std::string key = CaseFold(word);
  for (std::string_view reserved : kReserved) {
    if (key == reserved) return true;
  }
  return false;
}

absl::StatusOr<std::vector<Token>> Tokenize(std::string_view text) {
  return Lexer(text).Run();
}

absl::StatusOr<SqlAst> ParseSql(std::string_view text) {
  auto tokens = Tokenize(text);
  if (!tokens.ok()) return tokens.status();
  return Parser(*std::move(tokens)).Run();
}

}  // namespace cta::sql

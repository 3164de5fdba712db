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

#ifndef CTA_SQL_PARSER_H_
#define CTA_SQL_PARSER_H_

#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "cta/sql/ast.h"

namespace cta::sql {

enum class TokenKind { kIdent, kQuotedIdent, kString, kNumber, kSymbol, kEnd };

struct Token {
  TokenKind kind = TokenKind::kEnd;
  // Identifier or symbol text, unescaped string content, or number text.
  std::string text;
  char quote = 0;
  size_t offset = 0;
  int line = 1;
  int column = 1;
};

// Splits SQL text into tokens. Backticks and square brackets quote
// identifiers; single and double quotes delimit string literals.
absl::StatusOr<std::vector<Token>> Tokenize(std::string_view text);

// Parses one SELECT statement (with optional set operations). Errors are
// InvalidArgument and name the line, column and byte offset of the failure.
absl::StatusOr<SqlAst> ParseSql(std::string_view text);

// True when `word` is reserved and cannot be used as a bare identifier.
bool IsReservedWord(std::string_view word);

}  // namespace cta::sql

#endif  // CTA_SQL_PARSER_H_

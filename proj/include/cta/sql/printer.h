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

#ifndef CTA_SQL_PRINTER_H_
#define CTA_SQL_PRINTER_H_

#include <string>
#include <string_view>

#include "cta/sql/ast.h"

namespace cta::sql {

struct PrintOptions {
  bool lowercase_keywords = false;
};

// Renders SQL that ParseSql accepts and that parses back to the same tree.
// Identifiers keep their spelling; names that are not plain words are
// backtick-quoted.
std::string ToSql(const SqlAst& ast, const PrintOptions& options = {});
std::string QueryToSql(const Query& query, const PrintOptions& options = {});
std::string ExprToSql(const Expr& expr, const PrintOptions& options = {});

std::string QuoteIdentifier(std::string_view name);

}  // namespace cta::sql

#endif  // CTA_SQL_PRINTER_H_

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

#ifndef CTA_SQL_RESOLVER_H_
#define CTA_SQL_RESOLVER_H_

#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "cta/sql/ast.h"
#include "cta/table/table_model.h"

namespace cta::sql {

// Binds every column reference in `ast` against `db`, replacing any earlier
// binding. Lookup is case-insensitive. Unqualified names search the FROM
// items of the innermost select, then select-list aliases (GROUP BY, HAVING
// and ORDER BY only), then enclosing selects. Names that match nothing stay
// RefKind::kUnresolved.
//
// Errors: NotFound for a FROM table missing from the schema,
// FailedPrecondition for a reference that matches columns of more than one
// FROM item, InvalidArgument for nested aggregates.
absl::Status Resolve(SqlAst& ast, const Database& db);

// ParseSql followed by Resolve.
absl::StatusOr<SqlAst> ParseAndResolve(std::string_view sql,
                                       const Database& db);

// True when `status` came from an ambiguous column reference.
bool IsAmbiguityError(const absl::Status& status);

}  // namespace cta::sql

#endif  // CTA_SQL_RESOLVER_H_

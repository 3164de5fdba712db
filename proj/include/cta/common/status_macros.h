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

#ifndef CTA_COMMON_STATUS_MACROS_H_
#define CTA_COMMON_STATUS_MACROS_H_

#include "absl/status/status.h"
#include "absl/status/statusor.h"

#define CTA_RETURN_IF_ERROR(expr)                \
  do {                                           \
    const absl::Status _cta_status = (expr);     \
    if (!_cta_status.ok()) return _cta_status;   \
  } while (0)

#define CTA_STATUS_CONCAT_INNER(a, b) a##b
#define CTA_STATUS_CONCAT(a, b) CTA_STATUS_CONCAT_INNER(a, b)

#define CTA_ASSIGN_OR_RETURN(lhs, rexpr) \
  CTA_ASSIGN_OR_RETURN_IMPL(CTA_STATUS_CONCAT(_cta_statusor_, __LINE__), lhs, rexpr)

#define CTA_ASSIGN_OR_RETURN_IMPL(statusor, lhs, rexpr) \
  auto statusor = (rexpr);                              \
  if (!statusor.ok()) return statusor.status();         \
  lhs = std::move(statusor).value()

#endif  // CTA_COMMON_STATUS_MACROS_H_

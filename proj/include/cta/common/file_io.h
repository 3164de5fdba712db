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

#ifndef CTA_COMMON_FILE_IO_H_
#define CTA_COMMON_FILE_IO_H_

#include <filesystem>
#include <string>
#include <string_view>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace cta {

// Reads a whole file. Missing file -> NotFound.
absl::StatusOr<std::string> ReadFile(const std::filesystem::path& path);

// Writes through a temporary sibling file and renames it into place, so
// readers never observe a partially written file.
absl::Status WriteFileAtomic(const std::filesystem::path& path,
                             std::string_view contents);

}  // namespace cta

#endif  // CTA_COMMON_FILE_IO_H_

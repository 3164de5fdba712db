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

#ifndef CTA_TABLE_DATASET_IO_H_
#define CTA_TABLE_DATASET_IO_H_

#include <filesystem>
#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "cta/table/table_model.h"
#include "json.hpp"

namespace cta {

// On-disk dataset layouts.
//
// kSpiderLike: a directory holding tables.json (Spider tables.json records:
//   db_id, table_names[_original], column_names[_original] as
//   [table_index, name] pairs with the leading [-1, "*"] entry, column_types,
//   foreign_keys as column-index pairs) and optionally examples.json or
//   dev.json (records with db_id, question, query or gold_sql, optional
//   example_id and turn_index; SParC/CoSQL "interaction" records are
//   flattened into turns). Optional per-table extensions: table_captions,
//   table_tpes, table_domains; per-column: column_cells.
//
// kSingleTable: one file, either a JSON document
//   {"tables": [...], "examples": [...]} or line-delimited JSON where each
//   line is a table ({"table_id", "columns": [{"name", "type", "cells"}],
//   "caption", "tpe", "domain"}, or WikiSQL-style {"id", "header", "types",
//   "rows"}) or an example ({"example_id", "db_id", "question", "gold_sql"}).
//   Every table becomes a one-table database whose db_id is the table id.
enum class DatasetFormat { kSpiderLike, kSingleTable };

absl::StatusOr<DatasetFormat> ParseDatasetFormat(std::string_view name);

struct LoadOptions {
  // When false, invariant checks are skipped so ValidateCorpus can report
  // them instead.
  bool validate = true;
  size_t max_cell_samples = 32;
};

// Parse errors are InvalidArgument and name the file plus line or record;
// invariant failures are FailedPrecondition listing every offender.
absl::StatusOr<Corpus> LoadDataset(const std::filesystem::path& path,
                                   DatasetFormat format,
                                   const LoadOptions& options = {});

absl::Status SaveDataset(const Corpus& corpus,
                         const std::filesystem::path& path,
                         DatasetFormat format);

// One database as a Spider tables.json record (with the extensions above).
nlohmann::ordered_json DatabaseToSpiderJson(const Database& db);
absl::StatusOr<Database> DatabaseFromSpiderJson(
    const nlohmann::ordered_json& record, std::string_view locus);

// Annotation file: a JSON array of {"db_id"?, "table_id", "target_column",
// "rpl_candidates", "add_candidates"}. Intrinsic violations (duplicate
// candidates, self-replacement) are rejected.
absl::StatusOr<std::vector<AdvetaAnnotation>> LoadAnnotations(
    const std::filesystem::path& path);

// As above, and cross-checks every annotation against the corpus tables.
absl::StatusOr<std::vector<AdvetaAnnotation>> LoadAnnotations(
    const std::filesystem::path& path, const std::vector<Database>& databases);

absl::Status SaveAnnotations(const std::vector<AdvetaAnnotation>& annotations,
                             const std::filesystem::path& path);

}  // namespace cta

#endif  // CTA_TABLE_DATASET_IO_H_

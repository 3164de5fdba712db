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

#ifndef CTA_TABLE_TABLE_MODEL_H_
#define CTA_TABLE_TABLE_MODEL_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cta {

enum class ColumnType { kText, kNumber, kDate, kTime, kBoolean, kOther };

std::string_view ColumnTypeName(ColumnType type);

// Maps dataset type tags onto the six-value vocabulary. Spider's "others",
// WikiSQL's "real" and common SQL spellings are recognised; anything else
// becomes kOther.
ColumnType ParseColumnType(std::string_view tag);

struct Column {
  std::string name;
  ColumnType type = ColumnType::kText;
  std::vector<std::string> cell_samples;

  // Casefolded, whitespace-collapsed identity.
  std::string Key() const;

  bool operator==(const Column&) const = default;
};

struct Table {
  std::string table_id;
  std::optional<std::string> caption;
  // Table Primary Entity, e.g. "student".
  std::optional<std::string> tpe;
  std::optional<std::string> domain;
  std::vector<Column> columns;

  const Column* FindColumn(std::string_view name) const;
  Column* FindColumn(std::string_view name);

  bool operator==(const Table&) const = default;
};

struct ForeignKey {
  std::string table_id;
  std::string column;
  std::string ref_table_id;
  std::string ref_column;

  bool operator==(const ForeignKey&) const = default;
};

struct Database {
  std::string db_id;
  std::vector<Table> tables;
  std::vector<ForeignKey> foreign_keys;

  // Table ids compare by NameKey, as SQL does.
  const Table* FindTable(std::string_view table_id) const;
  Table* FindTable(std::string_view table_id);

  bool operator==(const Database&) const = default;
};

struct Example {
  std::string example_id;
  std::string db_id;
  std::string question;
  std::string gold_sql;
  std::optional<int> turn_index;

  bool operator==(const Example&) const = default;
};

// One manually annotated target column with its replacement (RPL) and
// addition (ADD) candidates.
struct AdvetaAnnotation {
  // Optional; needed only when table_id is not unique across the corpus.
  std::optional<std::string> db_id;
  std::string table_id;
  std::string target_column;
  std::vector<std::string> rpl_candidates;
  std::vector<std::string> add_candidates;

  bool operator==(const AdvetaAnnotation&) const = default;
};

struct Corpus {
  std::vector<Database> databases;
  std::vector<Example> examples;

  const Database* FindDatabase(std::string_view db_id) const;

  bool operator==(const Corpus&) const = default;
};

}  // namespace cta

#endif  // CTA_TABLE_TABLE_MODEL_H_

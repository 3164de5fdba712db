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

#include "cta/table/table_model.h"

#include <utility>

#include "cta/common/text.h"

namespace cta {

std::string_view ColumnTypeName(ColumnType type) {
  switch (type) {
    case ColumnType::kText:
      return "text";
    case ColumnType::kNumber:
      return "number";
    case ColumnType::kDate:
      return "date";
    case ColumnType::kTime:
      return "time";
    case ColumnType::kBoolean:
      return "boolean";
    case ColumnType::kOther:
      return "other";
  }
  return "other";
}

ColumnType ParseColumnType(std::string_view tag) {
  const std::string t = NameKey(tag);
  if (t == "text" || t == "string" || t == "varchar" || t == "char") {
    return ColumnType::kText;
  }
  if (t == "number" || t == "real" || t == "int" || t == "integer" ||
      t == "float" || t == "double" || t == "numeric" || t == "decimal") {
    return ColumnType::kNumber;
  }
  if (t == "date" || t == "datetime") return ColumnType::kDate;
  if (t == "time") return ColumnType::kTime;
  if (t == "boolean" || t == "bool") return ColumnType::kBoolean;
  return ColumnType::kOther;
}

std::string Column::Key() const { return NameKey(name); }

const Column* Table::FindColumn(std::string_view name) const {
  const std::string key = NameKey(name);
  for (const Column& column : columns) {
    if (column.Key() == key) return &column;
  }
  return nullptr;
}

Column* Table::FindColumn(std::string_view name) {
  return const_cast<Column*>(std::as_const(*this).FindColumn(name));
}

const Table* Database::FindTable(std::string_view table_id) const {
  const std::string key = NameKey(table_id);
  for (const Table& table : tables) {
    if (NameKey(table.table_id) == key) return &table;
  }
  return nullptr;
}

Table* Database::FindTable(std::string_view table_id) {
  return const_cast<Table*>(std::as_const(*this).FindTable(table_id));
}

const Database* Corpus::FindDatabase(std::string_view db_id) const {
  for (const Database& db : databases) {
    if (db.db_id == db_id) return &db;
  }
  return nullptr;
}

}  // namespace cta

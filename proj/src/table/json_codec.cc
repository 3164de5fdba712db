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

#include "cta/table/json_codec.h"

#include <algorithm>

#include "cta/common/str_cat.h"
#include "cta/common/text.h"

namespace cta {
namespace {

absl::Status FieldError(std::string_view locus, std::string_view field,
                        std::string_view problem) {
  return absl::InvalidArgumentError(
      StrCat(locus, ": field \"", field, "\" ", problem));
}

// Reads an optional string field; null and absent both mean "unset".
absl::StatusOr<std::optional<std::string>> OptionalString(
    const Json& json, std::string_view field, std::string_view locus) {
  auto it = json.find(field);
  if (it == json.end() || it->is_null()) return std::optional<std::string>();
  if (!it->is_string()) return FieldError(locus, field, "must be a string");
  return std::optional<std::string>(it->get<std::string>());
}

absl::StatusOr<std::string> RequiredString(const Json& json,
                                           std::string_view field,
                                           std::string_view locus) {
  auto it = json.find(field);
  if (it == json.end()) return FieldError(locus, field, "is missing");
  if (it->is_number_integer()) return it->dump();
  if (!it->is_string()) return FieldError(locus, field, "must be a string");
  return it->get<std::string>();
}

std::string ScalarToString(const Json& value) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_null()) return "";
  return value.dump();
}

absl::StatusOr<std::vector<std::string>> StringList(const Json& json,
                                                    std::string_view field,
                                                    std::string_view locus) {
  std::vector<std::string> out;
  auto it = json.find(field);
  if (it == json.end() || it->is_null()) return out;
  if (!it->is_array()) return FieldError(locus, field, "must be an array");
  for (const Json& item : *it) {
    if (!item.is_string()) {
      return FieldError(locus, field, "must contain only strings");
    }
    out.push_back(item.get<std::string>());
  }
  return out;
}

void PutOptional(Json& json, const char* field,
                 const std::optional<std::string>& value) {
  if (value.has_value()) json[field] = *value;
}

absl::StatusOr<Table> WikiSqlTableFromJson(const Json& json,
                                           std::string_view locus,
                                           size_t max_cell_samples) {
  Table table;
  auto id = RequiredString(json, "id", locus);
  if (!id.ok()) return id.status();
  table.table_id = *std::move(id);
  const Json& header = json.at("header");
  if (!header.is_array()) return FieldError(locus, "header", "must be an array");
  const Json empty = Json::array();
  const Json& types = json.contains("types") ? json.at("types") : empty;
  const Json& rows = json.contains("rows") ? json.at("rows") : empty;
  for (size_t i = 0; i < header.size(); ++i) {
    if (!header[i].is_string()) {
      return FieldError(locus, "header", "must contain only strings");
    }
    Column column;
    column.name = header[i].get<std::string>();
    column.type = i < types.size() && types[i].is_string()
                      ? ParseColumnType(types[i].get<std::string>())
                      : ColumnType::kText;
    for (const Json& row : rows) {
      if (column.cell_samples.size() >= max_cell_samples) break;
      if (row.is_array() && i < row.size()) {
        column.cell_samples.push_back(ScalarToString(row[i]));
      }
    }
    table.columns.push_back(std::move(column));
  }
  for (const char* field : {"caption", "page_title"}) {
    auto caption = OptionalString(json, field, locus);
    if (!caption.ok()) return caption.status();
    if (caption->has_value() && !IsBlank(**caption)) {
      table.caption = *std::move(caption);
      break;
    }
  }
  return table;
}

int LineOfOffset(std::string_view text, size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(
                 std::count(text.begin(), text.begin() + offset, '\n'));
}

}  // namespace

Json TableToJson(const Table& table) {
  Json json;
  json["table_id"] = table.table_id;
  PutOptional(json, "caption", table.caption);
  PutOptional(json, "tpe", table.tpe);
  PutOptional(json, "domain", table.domain);
  Json columns = Json::array();
  for (const Column& column : table.columns) {
    Json c;
    c["name"] = column.name;
    c["type"] = std::string(ColumnTypeName(column.type));
    if (!column.cell_samples.empty()) c["cells"] = column.cell_samples;
    columns.push_back(std::move(c));
  }
  json["columns"] = std::move(columns);
  return json;
}

Json ExampleToJson(const Example& example) {
  Json json;
  json["example_id"] = example.example_id;
  json["db_id"] = example.db_id;
  json["question"] = example.question;
  json["gold_sql"] = example.gold_sql;
  if (example.turn_index.has_value()) json["turn_index"] = *example.turn_index;
  return json;
}

Json AnnotationToJson(const AdvetaAnnotation& annotation) {
  Json json;
  PutOptional(json, "db_id", annotation.db_id);
  json["table_id"] = annotation.table_id;
  json["target_column"] = annotation.target_column;
  json["rpl_candidates"] = annotation.rpl_candidates;
  json["add_candidates"] = annotation.add_candidates;
  return json;
}

absl::StatusOr<Table> TableFromJson(const Json& json, std::string_view locus,
                                    size_t max_cell_samples) {
  if (!json.is_object()) {
    return absl::InvalidArgumentError(
        StrCat(locus, ": table record must be an object"));
  }
  if (json.contains("header")) {
    return WikiSqlTableFromJson(json, locus, max_cell_samples);
  }
  Table table;
  auto id = RequiredString(json, "table_id", locus);
  if (!id.ok()) return id.status();
  table.table_id = *std::move(id);
  for (auto [field, slot] :
       {std::pair{"caption", &table.caption}, std::pair{"tpe", &table.tpe},
        std::pair{"domain", &table.domain}}) {
    auto value = OptionalString(json, field, locus);
    if (!value.ok()) return value.status();
    *slot = *std::move(value);
  }
  auto columns = json.find("columns");
  if (columns == json.end() || !columns->is_array()) {
    return FieldError(locus, "columns", "must be an array");
  }
  for (size_t i = 0; i < columns->size(); ++i) {
    const Json& c = (*columns)[i];
    const std::string column_locus = StrCat(locus, ": column #", i);
    if (!c.is_object()) {
      return absl::InvalidArgumentError(
          StrCat(column_locus, " must be an object"));
    }
    Column column;
    auto name = RequiredString(c, "name", column_locus);
    if (!name.ok()) return name.status();
    column.name = *std::move(name);
    auto type = OptionalString(c, "type", column_locus);
    if (!type.ok()) return type.status();
    column.type = type->has_value() ? ParseColumnType(**type) : ColumnType::kText;
    auto cells = c.find("cells");
    if (cells != c.end() && !cells->is_null()) {
      if (!cells->is_array()) {
        return FieldError(column_locus, "cells", "must be an array");
      }
      for (const Json& cell : *cells) {
        if (column.cell_samples.size() >= max_cell_samples) break;
        column.cell_samples.push_back(ScalarToString(cell));
      }
    }
    table.columns.push_back(std::move(column));
  }
  return table;
}

absl::StatusOr<Example> ExampleFromJson(const Json& json,
                                        std::string_view locus) {
  if (!json.is_object()) {
    return absl::InvalidArgumentError(
        StrCat(locus, ": example record must be an object"));
  }
  Example example;
  auto id = RequiredString(json, "example_id", locus);
  if (!id.ok()) return id.status();
  example.example_id = *std::move(id);
  auto db = RequiredString(json, json.contains("db_id") ? "db_id" : "table_id",
                           locus);
  if (!db.ok()) return db.status();
  example.db_id = *std::move(db);
  auto question = RequiredString(json, "question", locus);
  if (!question.ok()) return question.status();
  example.question = *std::move(question);
  auto sql = RequiredString(json, json.contains("gold_sql") ? "gold_sql" : "query",
                            locus);
  if (!sql.ok()) return sql.status();
  example.gold_sql = *std::move(sql);
  auto turn = json.find("turn_index");
  if (turn != json.end() && !turn->is_null()) {
    if (!turn->is_number_integer()) {
      return FieldError(locus, "turn_index", "must be an integer");
    }
    example.turn_index = turn->get<int>();
  }
  return example;
}

absl::StatusOr<AdvetaAnnotation> AnnotationFromJson(const Json& json,
                                                    std::string_view locus) {
  if (!json.is_object()) {
    return absl::InvalidArgumentError(
        StrCat(locus, ": annotation must be an object"));
  }
  AdvetaAnnotation annotation;
  auto db = OptionalString(json, "db_id", locus);
  if (!db.ok()) return db.status();
  annotation.db_id = *std::move(db);
  auto table = RequiredString(json, "table_id", locus);
  if (!table.ok()) return table.status();
  annotation.table_id = *std::move(table);
  auto target = RequiredString(json, "target_column", locus);
  if (!target.ok()) return target.status();
  annotation.target_column = *std::move(target);
  auto rpl = StringList(json, "rpl_candidates", locus);
  if (!rpl.ok()) return rpl.status();
  annotation.rpl_candidates = *std::move(rpl);
  auto add = StringList(json, "add_candidates", locus);
  if (!add.ok()) return add.status();
  annotation.add_candidates = *std::move(add);
  return annotation;
}

absl::StatusOr<std::vector<JsonRecord>> ParseJsonRecords(
    std::string_view text, std::string_view source, bool* single_document) {
  std::vector<JsonRecord> out;
  try {
    Json doc = Json::parse(text);
    if (single_document != nullptr) *single_document = true;
    out.push_back({std::move(doc), std::string(source)});
    return out;
  } catch (const Json::parse_error& doc_error) {
    // Fall back to line-delimited JSON only when the first line stands on
    // its own; otherwise the document error is the accurate one.
    const size_t first_break = text.find('\n');
    const std::string_view first_line = text.substr(0, first_break);
    if (first_break == std::string_view::npos ||
        !Json::accept(first_line)) {
      return absl::InvalidArgumentError(StrCat(
          source, ":", LineOfOffset(text, doc_error.byte), ": malformed JSON: ",
          doc_error.what()));
    }
  }
  if (single_document != nullptr) *single_document = false;
  int line_number = 0;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_number;
    const std::string_view line = text.substr(start, end - start);
    start = end + 1;
    if (IsBlank(line)) continue;
    try {
      out.push_back(
          {Json::parse(line), StrCat(source, ":", line_number)});
    } catch (const Json::parse_error& e) {
      return absl::InvalidArgumentError(StrCat(
          source, ":", line_number, ": malformed JSON: ", e.what()));
    }
  }
  return out;
}

}  // namespace cta

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

#include "cta/table/dataset_io.h"

#include <map>

#include "cta/common/str_cat.h"
#include "cta/common/file_io.h"
#include "cta/common/status_macros.h"
#include "cta/common/text.h"
#include "cta/table/json_codec.h"
#include "cta/table/validate.h"

namespace cta {
namespace {

namespace fs = std::filesystem;

absl::Status RecordError(std::string_view locus, std::string_view problem) {
  return absl::InvalidArgumentError(StrCat(locus, ": ", problem));
}

const Json* FindEither(const Json& json, const char* preferred,
                       const char* fallback) {
  if (auto it = json.find(preferred); it != json.end()) return &*it;
  if (auto it = json.find(fallback); it != json.end()) return &*it;
  return nullptr;
}

// Optional per-table string extension such as "table_tpes".
absl::Status ReadTableExtension(const Json& record, const char* field,
                                std::string_view locus,
                                std::vector<Table>& tables,
                                std::optional<std::string> Table::*slot) {
  auto it = record.find(field);
  if (it == record.end() || it->is_null()) return absl::OkStatus();
  if (!it->is_array() || it->size() != tables.size()) {
    return RecordError(locus, StrCat("\"", field,
                                           "\" must be an array aligned with "
                                           "table_names"));
  }
  for (size_t i = 0; i < tables.size(); ++i) {
    const Json& value = (*it)[i];
    if (value.is_null()) continue;
    if (!value.is_string()) {
      return RecordError(locus, StrCat("\"", field, "\"[", i,
                                             "] must be a string or null"));
    }
    tables[i].*slot = value.get<std::string>();
  }
  return absl::OkStatus();
}

absl::StatusOr<Database> SpiderDatabaseFromJson(const Json& record,
                                                std::string_view locus,
                                                size_t max_cell_samples) {
  if (!record.is_object()) return RecordError(locus, "must be an object");
  Database db;
  auto db_id = record.find("db_id");
  if (db_id == record.end() || !db_id->is_string()) {
    return RecordError(locus, "missing string field \"db_id\"");
  }
  db.db_id = db_id->get<std::string>();
  const Json* table_names =
      FindEither(record, "table_names_original", "table_names");
  const Json* column_names =
      FindEither(record, "column_names_original", "column_names");
  if (table_names == nullptr || !table_names->is_array()) {
    return RecordError(locus, "missing array \"table_names\"");
  }
  if (column_names == nullptr || !column_names->is_array()) {
    return RecordError(locus, "missing array \"column_names\"");
  }
  for (const Json& name : *table_names) {
    if (!name.is_string()) return RecordError(locus, "table names must be strings");
    Table table;
    table.table_id = name.get<std::string>();
    db.tables.push_back(std::move(table));
  }
  const Json empty = Json::array();
  const Json& types = record.contains("column_types") ? record.at("column_types")
                                                      : empty;
  const Json& cells = record.contains("column_cells") ? record.at("column_cells")
                                                      : empty;
  // Global column index -> (table index, column index) for foreign keys.
  std::vector<std::pair<int, size_t>> column_slots;
  for (size_t i = 0; i < column_names->size(); ++i) {
    const Json& entry = (*column_names)[i];
    if (!entry.is_array() || entry.size() != 2 ||
        !entry[0].is_number_integer() || !entry[1].is_string()) {
      return RecordError(locus, StrCat("column_names[", i,
                                             "] must be [table_index, name]"));
    }
    const int table_index = entry[0].get<int>();
    if (table_index < 0) {
      column_slots.emplace_back(-1, 0);
      continue;
    }
    if (static_cast<size_t>(table_index) >= db.tables.size()) {
      return RecordError(locus, StrCat("column_names[", i,
                                             "] has table index ", table_index,
                                             " out of range"));
    }
    Column column;
    column.name = entry[1].get<std::string>();
    if (i < types.size() && types[i].is_string()) {
      column.type = ParseColumnType(types[i].get<std::string>());
    }
    if (i < cells.size() && cells[i].is_array()) {
      for (const Json& cell : cells[i]) {
        if (column.cell_samples.size() >= max_cell_samples) break;
        column.cell_samples.push_back(cell.is_string() ? cell.get<std::string>()
                                                       : cell.dump());
      }
    }
    auto& columns = db.tables[table_index].columns;
    column_slots.emplace_back(table_index, columns.size());
    columns.push_back(std::move(column));
  }
  CTA_RETURN_IF_ERROR(ReadTableExtension(record, "table_captions", locus,
                                         db.tables, &Table::caption));
  CTA_RETURN_IF_ERROR(
      ReadTableExtension(record, "table_tpes", locus, db.tables, &Table::tpe));
  CTA_RETURN_IF_ERROR(ReadTableExtension(record, "table_domains", locus,
                                         db.tables, &Table::domain));
  if (auto fks = record.find("foreign_keys");
      fks != record.end() && !fks->is_null()) {
    for (const Json& fk : *fks) {
      if (!fk.is_array() || fk.size() != 2 || !fk[0].is_number_integer() ||
          !fk[1].is_number_integer()) {
        return RecordError(locus, "foreign_keys entries must be index pairs");
      }
      const int from = fk[0].get<int>();
      const int to = fk[1].get<int>();
      const int n = static_cast<int>(column_slots.size());
      if (from < 0 || to < 0 || from >= n || to >= n ||
          column_slots[from].first < 0 || column_slots[to].first < 0) {
        return RecordError(locus, StrCat("foreign key [", from, ", ", to,
                                               "] references an unknown column"));
      }
      const Table& t_from = db.tables[column_slots[from].first];
      const Table& t_to = db.tables[column_slots[to].first];
      db.foreign_keys.push_back(
          {t_from.table_id, t_from.columns[column_slots[from].second].name,
           t_to.table_id, t_to.columns[column_slots[to].second].name});
    }
  }
  return db;
}

Json SpiderDatabaseToJson(const Database& db) {
  Json record;
  record["db_id"] = db.db_id;
  Json table_names = Json::array();
  Json column_names = Json::array({Json::array({-1, "*"})});
  Json column_types = Json::array({"text"});
  Json column_cells = Json::array({Json::array()});
  bool any_cells = false;
  std::map<std::pair<std::string, std::string>, int> column_index;
  for (size_t t = 0; t < db.tables.size(); ++t) {
    const Table& table = db.tables[t];
    table_names.push_back(table.table_id);
    for (const Column& column : table.columns) {
      column_index[{NameKey(table.table_id), column.Key()}] =
          static_cast<int>(column_names.size());
      column_names.push_back(Json::array({static_cast<int>(t), column.name}));
      column_types.push_back(std::string(ColumnTypeName(column.type)));
      column_cells.push_back(column.cell_samples);
      any_cells = any_cells || !column.cell_samples.empty();
    }
  }
  record["table_names_original"] = table_names;
  record["table_names"] = table_names;
  record["column_names_original"] = column_names;
  record["column_names"] = column_names;
  record["column_types"] = column_types;
  Json fks = Json::array();
  for (const ForeignKey& fk : db.foreign_keys) {
    auto from = column_index.find({NameKey(fk.table_id), NameKey(fk.column)});
    auto to = column_index.find({NameKey(fk.ref_table_id), NameKey(fk.ref_column)});
    if (from == column_index.end() || to == column_index.end()) continue;
    fks.push_back(Json::array({from->second, to->second}));
  }
  record["foreign_keys"] = fks;
  record["primary_keys"] = Json::array();
  if (any_cells) record["column_cells"] = column_cells;
  const auto extension = [&](const char* field,
                             std::optional<std::string> Table::*slot) {
    bool any = false;
    Json values = Json::array();
    for (const Table& table : db.tables) {
      const auto& value = table.*slot;
      any = any || value.has_value();
      values.push_back(value.has_value() ? Json(*value) : Json(nullptr));
    }
    if (any) record[field] = values;
  };
  extension("table_captions", &Table::caption);
  extension("table_tpes", &Table::tpe);
  extension("table_domains", &Table::domain);
  return record;
}

absl::StatusOr<std::vector<Example>> SpiderExamplesFromJson(
    const std::vector<JsonRecord>& records, bool single_document) {
  std::vector<Json> items;
  std::vector<std::string> loci;
  if (single_document) {
    const Json& doc = records.front().value;
    if (!doc.is_array()) {
      return RecordError(records.front().locus,
                         "examples file must hold a JSON array");
    }
    for (size_t i = 0; i < doc.size(); ++i) {
      items.push_back(doc[i]);
      loci.push_back(StrCat(records.front().locus, ": record ", i));
    }
  } else {
    for (const JsonRecord& record : records) {
      items.push_back(record.value);
      loci.push_back(record.locus);
    }
  }
  std::vector<Example> out;
  for (size_t i = 0; i < items.size(); ++i) {
    Json item = items[i];
    if (!item.is_object()) return RecordError(loci[i], "must be an object");
    if (item.contains("interaction")) {
      // SParC / CoSQL multi-turn record.
      const Json& turns = item.at("interaction");
      if (!turns.is_array()) {
        return RecordError(loci[i], "\"interaction\" must be an array");
      }
      for (size_t t = 0; t < turns.size(); ++t) {
        Json turn = turns[t];
        turn["db_id"] = item.value("db_id", "");
        turn["example_id"] = StrCat("ex", i, "-t", t);
        turn["turn_index"] = static_cast<int>(t);
        if (turn.contains("utterance")) turn["question"] = turn["utterance"];
        auto example =
            ExampleFromJson(turn, StrCat(loci[i], " turn ", t));
        if (!example.ok()) return example.status();
        out.push_back(*std::move(example));
      }
      continue;
    }
    if (!item.contains("example_id")) item["example_id"] = StrCat("ex", i);
    auto example = ExampleFromJson(item, loci[i]);
    if (!example.ok()) return example.status();
    out.push_back(*std::move(example));
  }
  return out;
}

absl::StatusOr<Corpus> LoadSpiderLike(const fs::path& path,
                                      const LoadOptions& options) {
  fs::path dir = path;
  fs::path tables_path = path / "tables.json";
  if (fs::is_regular_file(path)) {
    tables_path = path;
    dir = path.parent_path();
  }
  CTA_ASSIGN_OR_RETURN(std::string tables_text, ReadFile(tables_path));
  bool single = false;
  CTA_ASSIGN_OR_RETURN(
      std::vector<JsonRecord> records,
      ParseJsonRecords(tables_text, tables_path.filename().string(), &single));
  std::vector<std::pair<Json, std::string>> db_records;
  if (single) {
    const Json& doc = records.front().value;
    if (!doc.is_array()) {
      return RecordError(records.front().locus,
                         "tables file must hold a JSON array");
    }
    for (size_t i = 0; i < doc.size(); ++i) {
      db_records.emplace_back(doc[i],
                              StrCat(records.front().locus, ": record ", i));
    }
  } else {
    for (JsonRecord& record : records) {
      db_records.emplace_back(std::move(record.value), record.locus);
    }
  }
  Corpus corpus;
  for (const auto& [record, locus] : db_records) {
    CTA_ASSIGN_OR_RETURN(
        Database db,
        SpiderDatabaseFromJson(record, locus, options.max_cell_samples));
    corpus.databases.push_back(std::move(db));
  }
  for (const char* name : {"examples.json", "examples.jsonl", "dev.json"}) {
    const fs::path examples_path = dir / name;
    if (!fs::is_regular_file(examples_path)) continue;
    CTA_ASSIGN_OR_RETURN(std::string text, ReadFile(examples_path));
    CTA_ASSIGN_OR_RETURN(std::vector<JsonRecord> example_records,
                         ParseJsonRecords(text, name, &single));
    CTA_ASSIGN_OR_RETURN(corpus.examples,
                         SpiderExamplesFromJson(example_records, single));
    break;
  }
  return corpus;
}

absl::StatusOr<Corpus> LoadSingleTable(const fs::path& path,
                                       const LoadOptions& options) {
  CTA_ASSIGN_OR_RETURN(std::string text, ReadFile(path));
  bool single = false;
  CTA_ASSIGN_OR_RETURN(std::vector<JsonRecord> records,
                       ParseJsonRecords(text, path.filename().string(), &single));
  std::vector<JsonRecord> table_records;
  std::vector<JsonRecord> example_records;
  if (single) {
    const Json& doc = records.front().value;
    if (!doc.is_object()) {
      return RecordError(records.front().locus,
                         "document must be an object with \"tables\"");
    }
    const auto collect = [&](const char* field, std::vector<JsonRecord>& out)
        -> absl::Status {
      auto it = doc.find(field);
      if (it == doc.end()) return absl::OkStatus();
      if (!it->is_array()) {
        return RecordError(records.front().locus,
                           StrCat("\"", field, "\" must be an array"));
      }
      for (size_t i = 0; i < it->size(); ++i) {
        out.push_back({(*it)[i], StrCat(records.front().locus, ": ",
                                              field, "[", i, "]")});
      }
      return absl::OkStatus();
    };
    CTA_RETURN_IF_ERROR(collect("tables", table_records));
    CTA_RETURN_IF_ERROR(collect("examples", example_records));
  } else {
    for (JsonRecord& record : records) {
      if (record.value.is_object() && record.value.contains("question")) {
        example_records.push_back(std::move(record));
      } else {
        table_records.push_back(std::move(record));
      }
    }
  }
  Corpus corpus;
  for (const JsonRecord& record : table_records) {
    CTA_ASSIGN_OR_RETURN(
        Table table,
        TableFromJson(record.value, record.locus, options.max_cell_samples));
    Database db;
    db.db_id = table.table_id;
    db.tables.push_back(std::move(table));
    corpus.databases.push_back(std::move(db));
  }
  for (const JsonRecord& record : example_records) {
    CTA_ASSIGN_OR_RETURN(Example example,
                         ExampleFromJson(record.value, record.locus));
    corpus.examples.push_back(std::move(example));
  }
  return corpus;
}

}  // namespace

Json DatabaseToSpiderJson(const Database& db) { return SpiderDatabaseToJson(db); }

absl::StatusOr<Database> DatabaseFromSpiderJson(const Json& record,
                                                std::string_view locus) {
  return SpiderDatabaseFromJson(record, locus, LoadOptions().max_cell_samples);
}

absl::StatusOr<DatasetFormat> ParseDatasetFormat(std::string_view name) {
  if (name == "spider_like") return DatasetFormat::kSpiderLike;
  if (name == "single_table") return DatasetFormat::kSingleTable;
  return absl::InvalidArgumentError(
      StrCat("unknown dataset format \"", name,
                   "\" (expected spider_like or single_table)"));
}

absl::StatusOr<Corpus> LoadDataset(const fs::path& path, DatasetFormat format,
                                   const LoadOptions& options) {
  std::error_code ec;
  if (!fs::exists(path, ec)) {
    return absl::NotFoundError(StrCat("no such path: ", path.string()));
  }
  absl::StatusOr<Corpus> corpus = format == DatasetFormat::kSpiderLike
                                      ? LoadSpiderLike(path, options)
                                      : LoadSingleTable(path, options);
  if (!corpus.ok() || !options.validate) return corpus;
  CTA_RETURN_IF_ERROR(ViolationsToStatus(
      ValidateCorpus(corpus->databases, corpus->examples, {}), path.string()));
  return corpus;
}

absl::Status SaveDataset(const Corpus& corpus, const fs::path& path,
                         DatasetFormat format) {
  if (format == DatasetFormat::kSpiderLike) {
    Json tables = Json::array();
    for (const Database& db : corpus.databases) {
      tables.push_back(SpiderDatabaseToJson(db));
    }
    Json examples = Json::array();
    for (const Example& example : corpus.examples) {
      Json record = ExampleToJson(example);
      record["query"] = example.gold_sql;
      record.erase("gold_sql");
      examples.push_back(std::move(record));
    }
    CTA_RETURN_IF_ERROR(
        WriteFileAtomic(path / "tables.json", tables.dump(1) + "\n"));
    return WriteFileAtomic(path / "examples.json", examples.dump(1) + "\n");
  }
  Json doc;
  doc["tables"] = Json::array();
  for (const Database& db : corpus.databases) {
    if (db.tables.size() != 1 || NameKey(db.tables.front().table_id) !=
                                     NameKey(db.db_id)) {
      return absl::InvalidArgumentError(StrCat(
          "database \"", db.db_id,
          "\" cannot be written as single_table: it must hold exactly one "
          "table named like the database"));
    }
    doc["tables"].push_back(TableToJson(db.tables.front()));
  }
  doc["examples"] = Json::array();
  for (const Example& example : corpus.examples) {
    doc["examples"].push_back(ExampleToJson(example));
  }
  return WriteFileAtomic(path, doc.dump(1) + "\n");
}

absl::StatusOr<std::vector<AdvetaAnnotation>> LoadAnnotations(
    const fs::path& path) {
  CTA_ASSIGN_OR_RETURN(std::string text, ReadFile(path));
  bool single = false;
  CTA_ASSIGN_OR_RETURN(std::vector<JsonRecord> records,
                       ParseJsonRecords(text, path.filename().string(), &single));
  std::vector<JsonRecord> items;
  if (single) {
    const Json& doc = records.front().value;
    if (!doc.is_array()) {
      return RecordError(records.front().locus,
                         "annotation file must hold a JSON array");
    }
    for (size_t i = 0; i < doc.size(); ++i) {
      items.push_back({doc[i], StrCat(records.front().locus, ": record ", i)});
    }
  } else {
    items = std::move(records);
  }
  std::vector<AdvetaAnnotation> out;
  std::vector<Violation> violations;
  for (const JsonRecord& item : items) {
    CTA_ASSIGN_OR_RETURN(AdvetaAnnotation annotation,
                         AnnotationFromJson(item.value, item.locus));
    std::vector<Violation> v = ValidateAnnotationIntrinsic(annotation);
    violations.insert(violations.end(), v.begin(), v.end());
    out.push_back(std::move(annotation));
  }
  if (!violations.empty()) {
    absl::Status status = ViolationsToStatus(violations, path.string());
    return absl::InvalidArgumentError(status.message());
  }
  return out;
}

absl::StatusOr<std::vector<AdvetaAnnotation>> LoadAnnotations(
    const fs::path& path, const std::vector<Database>& databases) {
  CTA_ASSIGN_OR_RETURN(std::vector<AdvetaAnnotation> annotations,
                       LoadAnnotations(path));
  CTA_RETURN_IF_ERROR(ViolationsToStatus(
      ValidateCorpus(databases, {}, annotations), path.string()));
  return annotations;
}

absl::Status SaveAnnotations(const std::vector<AdvetaAnnotation>& annotations,
                             const fs::path& path) {
  Json doc = Json::array();
  for (const AdvetaAnnotation& annotation : annotations) {
    doc.push_back(AnnotationToJson(annotation));
  }
  return WriteFileAtomic(path, doc.dump(1) + "\n");
}

}  // namespace cta

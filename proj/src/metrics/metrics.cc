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

#include "cta/metrics/metrics.h"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <tuple>
#include <utility>

#include "cta/common/file_io.h"
#include "cta/common/status_macros.h"
#include "cta/common/str_cat.h"
#include "cta/common/text.h"
#include "cta/table/json_codec.h"
#include "cta/table/validate.h"

namespace cta {
namespace {

Prf PrfFromCounts(size_t overlap, size_t gold, size_t pred) {
  Prf prf;
  if (pred == 0) {
    prf.precision_undefined = true;
  } else {
    prf.precision = static_cast<double>(overlap) / pred;
  }
  if (gold == 0) {
    prf.recall_undefined = true;
  } else {
    prf.recall = static_cast<double>(overlap) / gold;
  }
  const double sum = prf.precision + prf.recall;
  if (sum == 0) {
    prf.f1_undefined = true;
  } else {
    prf.f1 = 2 * prf.precision * prf.recall / sum;
  }
  return prf;
}

void AddFlags(const Prf& prf, std::string_view prefix,
              std::vector<std::string>& flags) {
  if (prf.precision_undefined) flags.push_back(StrCat(prefix, "_P"));
  if (prf.recall_undefined) flags.push_back(StrCat(prefix, "_R"));
  if (prf.f1_undefined) flags.push_back(StrCat(prefix, "_F"));
}

std::set<ColumnLink> NormalizedColumns(const LinkSet& links) {
  std::set<ColumnLink> out;
  for (const ColumnLink& l : links.columns) {
    out.insert({NameKey(l.table_id), NameKey(l.column), l.token});
  }
  return out;
}

std::set<TableLink> NormalizedTables(const LinkSet& links) {
  std::set<TableLink> out;
  for (const TableLink& l : links.tables) {
    out.insert({NameKey(l.table_id), l.token});
  }
  return out;
}

template <typename T>
size_t OverlapSize(const std::set<T>& a, const std::set<T>& b) {
  size_t n = 0;
  for (const T& x : a) n += b.contains(x);
  return n;
}

struct Counts {
  size_t col_overlap = 0, col_gold = 0, col_pred = 0;
  size_t tab_overlap = 0, tab_gold = 0, tab_pred = 0;

  void Add(const LinkSet& gold, const LinkSet& pred) {
    const auto gc = NormalizedColumns(gold), pc = NormalizedColumns(pred);
    const auto gt = NormalizedTables(gold), pt = NormalizedTables(pred);
    col_overlap += OverlapSize(gc, pc);
    col_gold += gc.size();
    col_pred += pc.size();
    tab_overlap += OverlapSize(gt, pt);
    tab_gold += gt.size();
    tab_pred += pt.size();
  }

  LinkingScores Scores() const {
    LinkingScores s;
    s.column = PrfFromCounts(col_overlap, col_gold, col_pred);
    s.table = PrfFromCounts(tab_overlap, tab_gold, tab_pred);
    AddFlags(s.column, "Col", s.flags);
    AddFlags(s.table, "Tab", s.flags);
    return s;
  }
};

Json PrfToJson(const Prf& prf) {
  Json json;
  json["precision"] = prf.precision;
  json["recall"] = prf.recall;
  json["f1"] = prf.f1;
  return json;
}

absl::StatusOr<std::string> StringField(const Json& json, const char* key,
                                        std::string_view locus) {
  if (!json.contains(key) || !json[key].is_string()) {
    return absl::InvalidArgumentError(
        StrCat(locus, ": \"", key, "\" must be a string"));
  }
  return json[key].get<std::string>();
}

absl::StatusOr<size_t> TokenField(const Json& json, std::string_view locus) {
  if (!json.contains("token") || !json["token"].is_number_unsigned()) {
    return absl::InvalidArgumentError(
        StrCat(locus, ": \"token\" must be a non-negative integer"));
  }
  return json["token"].get<size_t>();
}

absl::StatusOr<LinkSet> LinkSetFromJson(const Json& json,
                                        std::string_view locus) {
  LinkSet links;
  if (json.contains("question_tokens")) {
    if (!json["question_tokens"].is_number_unsigned()) {
      return absl::InvalidArgumentError(
          StrCat(locus, ": \"question_tokens\" must be a non-negative integer"));
    }
    links.question_tokens = json["question_tokens"].get<size_t>();
  }
  for (const char* key : {"columns", "tables"}) {
    if (json.contains(key) && !json[key].is_array()) {
      return absl::InvalidArgumentError(
          StrCat(locus, ": \"", key, "\" must be an array"));
    }
  }
  if (json.contains("columns")) {
    for (const Json& item : json["columns"]) {
      if (!item.is_object()) {
        return absl::InvalidArgumentError(
            StrCat(locus, ": column links must be objects"));
      }
      CTA_ASSIGN_OR_RETURN(std::string table, StringField(item, "table", locus));
      CTA_ASSIGN_OR_RETURN(std::string column,
                           StringField(item, "column", locus));
      CTA_ASSIGN_OR_RETURN(size_t token, TokenField(item, locus));
      links.columns.insert({std::move(table), std::move(column), token});
    }
  }
  if (json.contains("tables")) {
    for (const Json& item : json["tables"]) {
      if (!item.is_object()) {
        return absl::InvalidArgumentError(
            StrCat(locus, ": table links must be objects"));
      }
      CTA_ASSIGN_OR_RETURN(std::string table, StringField(item, "table", locus));
      CTA_ASSIGN_OR_RETURN(size_t token, TokenField(item, locus));
      links.tables.insert({std::move(table), token});
    }
  }
  absl::Status status = ValidateLinkSet(links);
  if (!status.ok()) {
    return absl::InvalidArgumentError(
        StrCat(locus, ": ", std::string(status.message())));
  }
  return links;
}

std::string Fixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
  return buf;
}

void AddVocab(std::string_view name, std::set<std::string>& vocab) {
  for (const std::string& word : SplitWhitespace(CaseFold(name))) {
    vocab.insert(word);
  }
}

Json SplitToJson(const SplitStats& s) {
  Json json;
  json["total_tables"] = s.total_tables;
  json["avg_columns_per_table"] =
      s.avg_columns_per_table ? Json(*s.avg_columns_per_table) : Json();
  json["avg_perturbed_columns_per_table"] =
      s.avg_perturbed_columns_per_table
          ? Json(*s.avg_perturbed_columns_per_table)
          : Json();
  json["avg_candidates_per_column"] =
      s.avg_candidates_per_column ? Json(*s.avg_candidates_per_column)
                                  : Json();
  json["unique_columns"] = s.unique_columns;
  json["unique_vocab"] = s.unique_vocab;
  return json;
}

}  // namespace

absl::Status ValidateLinkSet(const LinkSet& links) {
  if (!links.question_tokens) return absl::OkStatus();
  const size_t n = *links.question_tokens;
  for (const ColumnLink& l : links.columns) {
    if (l.token >= n) {
      return absl::InvalidArgumentError(
          StrCat("column link ", l.table_id, ".", l.column, " points at token ",
                 l.token, " of a ", n, "-token question"));
    }
  }
  for (const TableLink& l : links.tables) {
    if (l.token >= n) {
      return absl::InvalidArgumentError(
          StrCat("table link ", l.table_id, " points at token ", l.token,
                 " of a ", n, "-token question"));
    }
  }
  return absl::OkStatus();
}

LinkingScores LinkingPrf(const LinkSet& gold, const LinkSet& pred) {
  Counts counts;
  counts.Add(gold, pred);
  return counts.Scores();
}

absl::StatusOr<LinkingScores> LinkingPrf(const LinkFile& gold,
                                         const LinkFile& pred) {
  for (const auto& [id, links] : pred) {
    if (!gold.contains(id)) {
      return absl::FailedPreconditionError(
          StrCat("prediction for unknown example ", id));
    }
  }
  static const LinkSet kEmpty;
  Counts counts;
  for (const auto& [id, links] : gold) {
    auto it = pred.find(id);
    counts.Add(links, it == pred.end() ? kEmpty : it->second);
  }
  return counts.Scores();
}

Json LinkingScoresToJson(const LinkingScores& scores) {
  Json json;
  json["column"] = PrfToJson(scores.column);
  json["table"] = PrfToJson(scores.table);
  json["flags"] = scores.flags;
  return json;
}

absl::StatusOr<LinkFile> ParseLinkFile(std::string_view text,
                                       std::string_view source) {
  LinkFile out;
  size_t line_no = 0;
  for (std::string_view rest = text; !rest.empty();) {
    const size_t end = rest.find('\n');
    const std::string_view line = rest.substr(0, end);
    rest = end == std::string_view::npos ? std::string_view()
                                         : rest.substr(end + 1);
    ++line_no;
    if (IsBlank(line)) continue;
    const std::string locus = StrCat(source, ":", line_no);
    const Json json = Json::parse(line, nullptr, false);
    if (json.is_discarded() || !json.is_object()) {
      return absl::InvalidArgumentError(StrCat(locus, ": not a JSON object"));
    }
    CTA_ASSIGN_OR_RETURN(std::string id,
                         StringField(json, "example_id", locus));
    CTA_ASSIGN_OR_RETURN(LinkSet links, LinkSetFromJson(json, locus));
    if (out.contains(id)) {
      return absl::InvalidArgumentError(
          StrCat(locus, ": duplicate example ", id));
    }
    out.emplace(std::move(id), std::move(links));
  }
  return out;
}

absl::StatusOr<LinkFile> LoadLinkFile(const std::filesystem::path& path) {
  CTA_ASSIGN_OR_RETURN(std::string text, ReadFile(path));
  return ParseLinkFile(text, path.filename().string());
}

absl::StatusOr<StatReport> CorpusStats(
    std::span<const Database> databases,
    std::span<const AdvetaAnnotation> annotations, const StatOptions& options) {
  StatReport report;
  size_t tables = 0;
  size_t columns = 0;
  std::set<std::string> orig_columns, orig_vocab;
  for (const Database& db : databases) {
    for (const Table& table : db.tables) {
      ++tables;
      columns += table.columns.size();
      if (options.original_annotated_only) continue;
      for (const Column& column : table.columns) {
        orig_columns.insert(NameKey(column.name));
        AddVocab(column.name, orig_vocab);
      }
    }
  }

  // (table, target key) -> candidate keys per kind. Repeated annotations of
  // one column are merged.
  struct Merged {
    std::string target;
    std::set<std::string> rpl, add;
  };
  std::map<std::pair<const Table*, std::string>, Merged> merged;
  for (const AdvetaAnnotation& a : annotations) {
    auto table = ResolveAnnotationTable(a, databases);
    if (!table.ok()) {
      return absl::FailedPreconditionError(
          std::string(table.status().message()));
    }
    const Column* column = (*table)->FindColumn(a.target_column);
    if (column == nullptr) {
      return absl::FailedPreconditionError(
          StrCat("annotation target ", a.table_id, ".", a.target_column,
                 " does not exist"));
    }
    Merged& m = merged[{*table, NameKey(column->name)}];
    m.target = column->name;
    for (const std::string& c : a.rpl_candidates) m.rpl.insert(NameKey(c));
    for (const std::string& c : a.add_candidates) m.add.insert(NameKey(c));
  }

  size_t rpl_columns = 0, add_columns = 0, rpl_candidates = 0,
         add_candidates = 0;
  std::set<std::string> rpl_names, rpl_vocab, add_names, add_vocab;
  for (const auto& [key, m] : merged) {
    if (options.original_annotated_only) {
      orig_columns.insert(key.second);
      AddVocab(m.target, orig_vocab);
    }
    if (!m.rpl.empty()) ++rpl_columns;
    if (!m.add.empty()) ++add_columns;
    rpl_candidates += m.rpl.size();
    add_candidates += m.add.size();
    for (const std::string& c : m.rpl) {
      rpl_names.insert(c);
      AddVocab(c, rpl_vocab);
    }
    for (const std::string& c : m.add) {
      add_names.insert(c);
      AddVocab(c, add_vocab);
    }
  }

  const auto ratio = [](size_t num, size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / den;
  };
  report.original.total_tables = tables;
  report.original.avg_columns_per_table = ratio(columns, tables);
  report.original.unique_columns = orig_columns.size();
  report.original.unique_vocab = orig_vocab.size();

  report.rpl.total_tables = tables;
  report.rpl.avg_perturbed_columns_per_table = ratio(rpl_columns, tables);
  report.rpl.avg_candidates_per_column = ratio(rpl_candidates, rpl_columns);
  report.rpl.unique_columns = rpl_names.size();
  report.rpl.unique_vocab = rpl_vocab.size();

  report.add.total_tables = tables;
  report.add.avg_perturbed_columns_per_table = ratio(add_columns, tables);
  report.add.avg_candidates_per_column = ratio(add_candidates, add_columns);
  report.add.unique_columns = add_names.size();
  report.add.unique_vocab = add_vocab.size();
  return report;
}

Json StatReportToJson(const StatReport& report) {
  Json json;
  json["original"] = SplitToJson(report.original);
  json["rpl"] = SplitToJson(report.rpl);
  json["add"] = SplitToJson(report.add);
  return json;
}

std::string RenderStatReport(const StatReport& report) {
  const auto opt = [](const std::optional<double>& v) {
    return v ? Fixed(*v, 2) : std::string("--");
  };
  const std::vector<std::pair<std::string, std::function<std::string(
                                               const SplitStats&)>>>
      rows = {
          {"Total tables",
           [](const SplitStats& s) { return StrCat(s.total_tables); }},
          {"Avg. columns per table",
           [&](const SplitStats& s) { return opt(s.avg_columns_per_table); }},
          {"Avg. perturbed columns per table",
           [&](const SplitStats& s) {
             return opt(s.avg_perturbed_columns_per_table);
           }},
          {"Avg. candidates per column",
           [&](const SplitStats& s) {
             return opt(s.avg_candidates_per_column);
           }},
          {"Unique columns",
           [](const SplitStats& s) { return StrCat(s.unique_columns); }},
          {"Unique vocab",
           [](const SplitStats& s) { return StrCat(s.unique_vocab); }},
      };
  std::vector<std::vector<std::string>> cells = {{"", "Orig.", "RPL", "ADD"}};
  for (const auto& [label, get] : rows) {
    cells.push_back(
        {label, get(report.original), get(report.rpl), get(report.add)});
  }
  std::vector<size_t> width(4, 0);
  for (const auto& row : cells) {
    for (size_t i = 0; i < row.size(); ++i) {
      width[i] = std::max(width[i], row[i].size());
    }
  }
  std::string out;
  for (const auto& row : cells) {
    std::string line = row[0] + std::string(width[0] - row[0].size(), ' ');
    for (size_t i = 1; i < row.size(); ++i) {
      line += "  ";
      line += std::string(width[i] - row[i].size(), ' ') + row[i];
    }
    out += line + "\n";
  }
  return out;
}

}  // namespace cta

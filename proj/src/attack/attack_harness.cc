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

#include "cta/attack/attack_harness.h"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <set>
#include <thread>

#include "cta/common/file_io.h"
#include "cta/common/rng.h"
#include "cta/common/status_macros.h"
#include "cta/common/str_cat.h"
#include "cta/common/text.h"
#include "cta/sql/printer.h"
#include "cta/sql/resolver.h"
#include "cta/sql/sql_tools.h"
#include "cta/table/dataset_io.h"
#include "cta/table/json_codec.h"
#include "cta/table/validate.h"

namespace cta {
namespace {

const AdvetaAnnotation* FindAnnotation(
    std::span<const AdvetaAnnotation> annotations, std::string_view db_id,
    std::string_view table_id, std::string_view column) {
  for (const AdvetaAnnotation& a : annotations) {
    if (a.db_id.has_value() && NameKey(*a.db_id) != NameKey(db_id)) continue;
    if (NameKey(a.table_id) == NameKey(table_id) &&
        NameKey(a.target_column) == NameKey(column)) {
      return &a;
    }
  }
  return nullptr;
}

std::string Fixed1(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.1f", x);
  return buf;
}

}  // namespace

std::string_view AttackKindName(AttackKind kind) {
  return kind == AttackKind::kRpl ? "rpl" : "add";
}

absl::StatusOr<AttackKind> ParseAttackKind(std::string_view name) {
  const std::string key = CaseFold(name);
  if (key == "rpl") return AttackKind::kRpl;
  if (key == "add") return AttackKind::kAdd;
  return absl::InvalidArgumentError(
      StrCat("unknown attack kind \"", name, "\" (expected rpl or add)"));
}

const Database* AttackRun::FindDatabase(std::string_view db_id) const {
  for (const Database& db : databases) {
    if (db.db_id == db_id) return &db;
  }
  return nullptr;
}

size_t AttackRun::flagged() const {
  return std::count_if(examples.begin(), examples.end(),
                       [](const AttackExample& e) { return !e.flags.empty(); });
}

absl::StatusOr<AttackRun> SampleAttackSet(
    const Corpus& dataset, std::span<const AdvetaAnnotation> annotations,
    AttackKind kind, uint64_t seed) {
  std::vector<Violation> violations;
  for (const Violation& v :
       ValidateCorpus(dataset.databases, {}, annotations)) {
    if (v.rule_id.starts_with("annotation.")) violations.push_back(v);
  }
  CTA_RETURN_IF_ERROR(ViolationsToStatus(violations, "annotations"));

  AttackRun run{.kind = kind, .seed = seed};
  std::set<std::string> originals_used;
  for (const Example& example : dataset.examples) {
    const Database* db = dataset.FindDatabase(example.db_id);
    if (db == nullptr) {
      return absl::FailedPreconditionError(StrCat(
          "example ", example.example_id, " names unknown database ",
          example.db_id));
    }
    auto ast = sql::ParseAndResolve(example.gold_sql, *db);
    auto refs = ast.ok() ? sql::ExtractColumnRefs(*ast)
                         : absl::StatusOr<std::set<sql::ColumnId>>(ast.status());
    if (!refs.ok()) {
      run.skipped.push_back(example.example_id);
      continue;
    }
    AttackExample out{.example_id = example.example_id,
                      .db_id = db->db_id,
                      .original_gold = example.gold_sql,
                      .gold_sql = example.gold_sql};
    if (refs->empty()) out.flags.push_back("gold SQL mentions no column");
    Rng rng(DeriveSeed(seed, {example.example_id, AttackKindName(kind)}));

    Database perturbed = *db;
    sql::ColumnMapping mapping;
    std::map<std::string, std::set<std::string>> new_names;
    for (const sql::ColumnId& id : *refs) {
      const AdvetaAnnotation* annotation =
          FindAnnotation(annotations, db->db_id, id.table_id, id.column);
      const Table& table = *perturbed.FindTable(id.table_id);
      std::vector<const std::string*> usable;
      if (annotation != nullptr) {
        const auto& pool = kind == AttackKind::kRpl ? annotation->rpl_candidates
                                                    : annotation->add_candidates;
        for (const std::string& name : pool) {
          const Column* clash = table.FindColumn(name);
          const bool taken =
              new_names[NameKey(table.table_id)].contains(NameKey(name));
          if (kind == AttackKind::kRpl) {
            if (!taken && (clash == nullptr || clash->Key() == NameKey(id.column))) {
              usable.push_back(&name);
            }
          } else if (clash == nullptr && !taken) {
            usable.push_back(&name);
          }
        }
      }
      if (usable.empty()) {
        out.flags.push_back(StrCat("no ", AttackKindName(kind),
                                   " candidate for ", id.table_id, ".",
                                   id.column));
        continue;
      }
      const std::string& pick = *usable[rng.UniformIndex(usable.size())];
      new_names[NameKey(table.table_id)].insert(NameKey(pick));
      out.applied.push_back({id.table_id, id.column, pick});
      if (kind == AttackKind::kRpl) {
        mapping[id] = pick;
      } else {
        perturbed.FindTable(id.table_id)->columns.push_back({.name = pick});
      }
    }

    absl::Status status = absl::OkStatus();
    if (!out.applied.empty() && kind == AttackKind::kRpl) {
      auto renamed = sql::RenameColumns(*db, mapping);
      auto gold = renamed.ok() ? sql::RewriteColumns(*ast, mapping, *db)
                               : absl::StatusOr<sql::SqlAst>(renamed.status());
      if (gold.ok()) {
        perturbed = *std::move(renamed);
        out.gold_sql = sql::ToSql(*gold);
      } else {
        status = gold.status();
      }
    } else if (!out.applied.empty()) {
      auto invariant = sql::CheckAddInvariance(*ast, *db, perturbed);
      if (!invariant.ok()) {
        status = invariant.status();
      } else if (!*invariant) {
        status = absl::FailedPreconditionError(
            "added columns change the gold query's bindings");
      }
    }
    if (!status.ok()) {
      out.flags.push_back(StrCat("perturbation dropped: ", status.message()));
      out.applied.clear();
    }
    if (out.applied.empty()) {
      originals_used.insert(db->db_id);
    } else {
      perturbed.db_id = StrCat(db->db_id, "__", AttackKindName(kind), "__",
                               example.example_id);
      out.db_id = perturbed.db_id;
      run.databases.push_back(std::move(perturbed));
    }
    run.examples.push_back(std::move(out));
  }
  std::vector<Database> originals;
  for (const Database& db : dataset.databases) {
    if (originals_used.contains(db.db_id)) originals.push_back(db);
  }
  run.databases.insert(run.databases.begin(), originals.begin(),
                       originals.end());
  return run;
}

Json AttackRunToJson(const AttackRun& run) {
  Json json;
  json["kind"] = AttackKindName(run.kind);
  json["seed"] = run.seed;
  json["databases"] = Json::array();
  for (const Database& db : run.databases) {
    json["databases"].push_back(DatabaseToSpiderJson(db));
  }
  json["examples"] = Json::array();
  for (const AttackExample& e : run.examples) {
    Json item;
    item["example_id"] = e.example_id;
    item["db_id"] = e.db_id;
    item["original_gold"] = e.original_gold;
    item["gold_sql"] = e.gold_sql;
    item["applied"] = Json::array();
    for (const AppliedPerturbation& p : e.applied) {
      item["applied"].push_back({{"table_id", p.table_id},
                                 {"column", p.column},
                                 {"candidate", p.candidate}});
    }
    item["flags"] = e.flags;
    json["examples"].push_back(std::move(item));
  }
  json["skipped"] = run.skipped;
  return json;
}

absl::StatusOr<AttackRun> AttackRunFromJson(const Json& json,
                                            std::string_view source) {
  const auto bad = [&](std::string_view what) {
    return absl::InvalidArgumentError(StrCat(source, ": ", what));
  };
  if (!json.is_object() || !json.contains("kind") || !json["kind"].is_string() ||
      !json.contains("seed") || !json["seed"].is_number_unsigned() ||
      !json.contains("databases") || !json["databases"].is_array() ||
      !json.contains("examples") || !json["examples"].is_array()) {
    return bad("attack run needs kind, seed, databases and examples");
  }
  AttackRun run;
  CTA_ASSIGN_OR_RETURN(run.kind,
                       ParseAttackKind(json["kind"].get<std::string>()));
  run.seed = json["seed"].get<uint64_t>();
  for (size_t i = 0; i < json["databases"].size(); ++i) {
    CTA_ASSIGN_OR_RETURN(
        Database db, DatabaseFromSpiderJson(json["databases"][i],
                                            StrCat(source, ": database ", i)));
    run.databases.push_back(std::move(db));
  }
  try {
    for (const Json& item : json["examples"]) {
      AttackExample e{.example_id = item.at("example_id").get<std::string>(),
                      .db_id = item.at("db_id").get<std::string>(),
                      .original_gold = item.at("original_gold").get<std::string>(),
                      .gold_sql = item.at("gold_sql").get<std::string>(),
                      .flags = item.value("flags", std::vector<std::string>{})};
      for (const Json& p : item.value("applied", Json::array())) {
        e.applied.push_back({p.at("table_id").get<std::string>(),
                             p.at("column").get<std::string>(),
                             p.at("candidate").get<std::string>()});
      }
      if (run.FindDatabase(e.db_id) == nullptr) {
        return bad(StrCat("example ", e.example_id, " names unknown database ",
                          e.db_id));
      }
      run.examples.push_back(std::move(e));
    }
    run.skipped = json.value("skipped", std::vector<std::string>{});
  } catch (const nlohmann::json::exception& e) {
    return bad(e.what());
  }
  return run;
}

absl::Status SaveAttackRun(const AttackRun& run,
                           const std::filesystem::path& path) {
  return WriteFileAtomic(path, AttackRunToJson(run).dump(1) + "\n");
}

absl::StatusOr<AttackRun> LoadAttackRun(const std::filesystem::path& path) {
  CTA_ASSIGN_OR_RETURN(std::string text, ReadFile(path));
  Json json = Json::parse(text, nullptr, false);
  if (json.is_discarded()) {
    return absl::InvalidArgumentError(
        StrCat(path.filename().string(), ": not valid JSON"));
  }
  return AttackRunFromJson(json, path.filename().string());
}

absl::StatusOr<Predictions> ParsePredictions(std::string_view text,
                                             std::string_view source) {
  Predictions out;
  size_t line_no = 0;
  for (std::string_view rest = text; !rest.empty();) {
    const size_t end = rest.find('\n');
    std::string_view line = rest.substr(0, end);
    rest = end == std::string_view::npos ? std::string_view() : rest.substr(end + 1);
    ++line_no;
    if (IsBlank(line)) continue;
    const std::string locus = StrCat(source, ":", line_no);
    Json json = Json::parse(line, nullptr, false);
    if (json.is_discarded() || !json.is_object() ||
        !json.contains("example_id") || !json["example_id"].is_string() ||
        !json.contains("sql") || !json["sql"].is_string()) {
      return absl::InvalidArgumentError(
          StrCat(locus, ": expected {\"example_id\": string, \"sql\": string}"));
    }
    std::string id = json["example_id"].get<std::string>();
    if (out.contains(id)) {
      return absl::InvalidArgumentError(
          StrCat(locus, ": duplicate prediction for example ", id));
    }
    out.emplace(std::move(id), json["sql"].get<std::string>());
  }
  return out;
}

absl::StatusOr<Predictions> LoadPredictions(const std::filesystem::path& path) {
  CTA_ASSIGN_OR_RETURN(std::string text, ReadFile(path));
  return ParsePredictions(text, path.filename().string());
}

Json EvalResultToJson(const EvalResult& result) {
  Json json;
  json["kind"] = AttackKindName(result.kind);
  json["seed"] = result.seed;
  json["total"] = result.total;
  json["matched"] = result.matched;
  json["missing"] = result.missing;
  json["em"] = result.em;
  json["mismatched"] = result.mismatched;
  return json;
}

absl::StatusOr<EvalResult> Evaluate(const AttackRun& run,
                                    const Predictions& predictions,
                                    int threads) {
  const size_t n = run.examples.size();
  std::vector<absl::StatusOr<bool>> outcomes(n, false);
  std::vector<char> missing(n, 0);
  std::atomic<size_t> next{0};
  const auto work = [&] {
    for (size_t i = next++; i < n; i = next++) {
      const AttackExample& e = run.examples[i];
      auto it = predictions.find(e.example_id);
      if (it == predictions.end()) {
        missing[i] = 1;
        continue;
      }
      const Database* db = run.FindDatabase(e.db_id);
      outcomes[i] = db == nullptr
                        ? absl::StatusOr<bool>(absl::FailedPreconditionError(
                              StrCat("unknown database ", e.db_id)))
                        : sql::ExactMatch(it->second, e.gold_sql, *db);
    }
  };
  const size_t workers =
      std::clamp<size_t>(static_cast<size_t>(std::max(threads, 1)), 1, std::max<size_t>(n, 1));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  EvalResult result{.kind = run.kind, .seed = run.seed, .total = n};
  for (size_t i = 0; i < n; ++i) {
    if (!outcomes[i].ok()) {
      return absl::Status(outcomes[i].status().code(),
                          StrCat("example ", run.examples[i].example_id, ": ",
                                 outcomes[i].status().message()));
    }
    result.missing += missing[i];
    if (*outcomes[i]) {
      ++result.matched;
    } else {
      result.mismatched.push_back(run.examples[i].example_id);
    }
  }
  result.em = n == 0 ? 0 : 100.0 * static_cast<double>(result.matched) /
                               static_cast<double>(n);
  return result;
}

absl::StatusOr<EvalReport> Aggregate(double dev_em,
                                     std::span<const double> seed_ems,
                                     FluctuationMode mode) {
  if (seed_ems.empty() || seed_ems.size() > 5) {
    return absl::InvalidArgumentError(
        StrCat("expected 1 to 5 seed EMs, got ", seed_ems.size()));
  }
  for (double x : seed_ems) {
    if (!std::isfinite(x)) {
      return absl::InvalidArgumentError("seed EMs must be finite");
    }
  }
  if (!std::isfinite(dev_em)) {
    return absl::InvalidArgumentError("dev EM must be finite");
  }
  EvalReport report{.dev_em = dev_em,
                    .seed_ems = {seed_ems.begin(), seed_ems.end()},
                    .mode = mode};
  double sum = 0;
  for (double x : seed_ems) sum += x;
  report.mean = sum / static_cast<double>(seed_ems.size());
  if (mode == FluctuationMode::kRange) {
    const auto [lo, hi] = std::minmax_element(seed_ems.begin(), seed_ems.end());
    report.fluctuation = *hi - *lo;
  } else {
    double sq = 0;
    for (double x : seed_ems) sq += (x - report.mean) * (x - report.mean);
    report.fluctuation = std::sqrt(sq / static_cast<double>(seed_ems.size()));
  }
  report.absolute_drop = dev_em - report.mean;
  if (dev_em != 0) report.relative_drop = report.absolute_drop / dev_em;
  return report;
}

std::string FormatDrop(const EvalReport& report) {
  const std::string relative =
      report.relative_drop
          ? StrCat(Fixed1(-100 * *report.relative_drop), "%")
          : std::string("n/a");
  return StrCat(Fixed1(-report.absolute_drop), " / ", relative);
}

Json EvalReportToJson(const EvalReport& report) {
  Json json;
  json["dev_em"] = report.dev_em;
  json["seed_ems"] = report.seed_ems;
  json["mean"] = report.mean;
  json["fluctuation"] = report.fluctuation;
  json["fluctuation_mode"] =
      report.mode == FluctuationMode::kRange ? "range" : "stddev";
  json["absolute_drop"] = report.absolute_drop;
  json["relative_drop"] =
      report.relative_drop ? Json(*report.relative_drop) : Json(nullptr);
  json["drop"] = FormatDrop(report);
  return json;
}

std::string RenderReportTable(
    std::span<const std::pair<std::string, EvalReport>> rows) {
  std::vector<std::array<std::string, 4>> cells = {
      {"Run", "Dev", "Attacked EM", "Drop"}};
  for (const auto& [label, report] : rows) {
    cells.push_back({label, Fixed1(report.dev_em),
                     StrCat(Fixed1(report.mean), " ± ",
                            Fixed1(report.fluctuation)),
                     StrCat("(", FormatDrop(report), ")")});
  }
  std::array<size_t, 4> width{};
  const auto display_width = [](const std::string& s) {
    // "±" is two bytes in UTF-8 but one column wide.
    size_t w = s.size();
    for (size_t at = s.find("±"); at != std::string::npos;
         at = s.find("±", at + 1)) {
      --w;
    }
    return w;
  };
  for (const auto& row : cells) {
    for (size_t c = 0; c < 4; ++c) {
      width[c] = std::max(width[c], display_width(row[c]));
    }
  }
  std::string out;
  for (size_t r = 0; r < cells.size(); ++r) {
    for (size_t c = 0; c < 4; ++c) {
      const std::string& cell = cells[r][c];
      if (c > 0) out += "  ";
      out += cell;
      if (c < 3) out.append(width[c] - display_width(cell), ' ');
    }
    out += "\n";
    if (r == 0) {
      size_t total = 0;
      for (size_t w : width) total += w;
      out.append(total + 6, '-');
      out += "\n";
    }
  }
  return out;
}

}  // namespace cta

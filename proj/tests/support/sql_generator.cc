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

#include "support/sql_generator.h"

#include <vector>

#include "cta/common/str_cat.h"
#include "cta/sql/printer.h"

namespace cta::testing {
namespace {

using sql::QuoteIdentifier;

template <typename T>
const T& Pick(const std::vector<T>& items, Rng& rng) {
  return items[rng.UniformIndex(items.size())];
}

bool Chance(Rng& rng, double p) { return rng.UniformDouble() < p; }

struct Source {
  const Table* table;
  std::string qualifier;  // empty for unqualified single-table queries
};

class Generator {
 public:
  Generator(const Database& db, Rng& rng) : db_(db), rng_(rng) {}

  std::string Query(int depth) {
    std::string out = Select(depth);
    if (depth == 0 && Chance(rng_, 0.15)) {
      static const std::vector<std::string> kOps = {"UNION", "INTERSECT",
                                                    "EXCEPT"};
      // Set operands share one output column.
      StrAppend(&out, " ", Pick(kOps, rng_), " ", SimpleSelect());
    }
    return out;
  }

 private:
  std::string Column(const Source& source) {
    const auto& columns = source.table->columns;
    const std::string name = QuoteIdentifier(Pick(columns, rng_).name);
    return source.qualifier.empty() ? name
                                    : StrCat(source.qualifier, ".", name);
  }

  std::string Literal() {
    if (Chance(rng_, 0.5)) return StrCat(rng_.UniformIndex(200));
    const char* quote = Chance(rng_, 0.5) ? "'" : "\"";
    return StrCat(quote, "v", rng_.UniformIndex(50), quote);
  }

  const Table& RandomTable() { return Pick(db_.tables, rng_); }

  std::string SimpleSelect() {
    const Table& table = RandomTable();
    Source source{&table, ""};
    std::string out = StrCat("SELECT ", Column(source), " FROM ",
                             QuoteIdentifier(table.table_id));
    if (Chance(rng_, 0.5)) {
      StrAppend(&out, " WHERE ", Column(source), " = ", Literal());
    }
    return out;
  }

  std::string Condition(const std::vector<Source>& sources, int depth) {
    const Source& source = Pick(sources, rng_);
    static const std::vector<std::string> kComparisons = {"=", "!=", "<>", "<",
                                                          ">", "<=", ">="};
    switch (rng_.UniformIndex(depth < 1 ? 9 : 6)) {
      case 0:
      case 1:
        return StrCat(Column(source), " ", Pick(kComparisons, rng_), " ",
                      Literal());
      case 2:
        return StrCat(Column(source), Chance(rng_, 0.3) ? " NOT" : "",
                      " LIKE '%", rng_.UniformIndex(10), "%'");
      case 3:
        return StrCat(Column(source), " BETWEEN ", rng_.UniformIndex(50),
                      " AND ", 50 + rng_.UniformIndex(50));
      case 4:
        return StrCat(Column(source), " = ", Column(Pick(sources, rng_)));
      case 5:
        return StrCat(Column(source), " IN (", Literal(), ", ", Literal(), ")");
      case 6: {
        const Table& inner = RandomTable();
        return StrCat(Column(source), Chance(rng_, 0.4) ? " NOT IN" : " IN",
                      " (SELECT ", Column({&inner, ""}), " FROM ",
                      QuoteIdentifier(inner.table_id), ")");
      }
      case 7: {
        const Table& inner = RandomTable();
        static const std::vector<std::string> kAggregates = {"avg", "max",
                                                             "min"};
        return StrCat(Column(source), " > (SELECT ", Pick(kAggregates, rng_),
                      "(", Column({&inner, ""}), ") FROM ",
                      QuoteIdentifier(inner.table_id), ")");
      }
      default:
        return StrCat("NOT ", Column(source), " = ", Literal());
    }
  }

  std::string SelectItem(const std::vector<Source>& sources) {
    const Source& source = Pick(sources, rng_);
    switch (rng_.UniformIndex(6)) {
      case 0:
        return "count(*)";
      case 1:
        return StrCat(Chance(rng_, 0.5) ? "max" : "sum", "(", Column(source),
                      ")");
      case 2:
        return StrCat("count(DISTINCT ", Column(source), ")");
      case 3:
        return StrCat(Column(source), " + ", rng_.UniformIndex(10));
      default:
        return Column(source);
    }
  }

  std::string Select(int depth) {
    std::vector<Source> sources;
    std::string from;
    if (db_.tables.size() > 1 && Chance(rng_, 0.4)) {
      const Table& a = RandomTable();
      const Table* b = &RandomTable();
      while (b == &a) b = &RandomTable();
      sources = {{&a, "T1"}, {b, "T2"}};
      from = StrCat(QuoteIdentifier(a.table_id), " AS T1 JOIN ",
                    QuoteIdentifier(b->table_id), " AS T2 ON ",
                    Column(sources[0]), " = ", Column(sources[1]));
    } else {
      const Table& a = RandomTable();
      sources = {{&a, ""}};
      from = QuoteIdentifier(a.table_id);
    }
    std::string out = "SELECT ";
    if (Chance(rng_, 0.15)) out += "DISTINCT ";
    const size_t items = 1 + rng_.UniformIndex(3);
    for (size_t i = 0; i < items; ++i) {
      if (i > 0) out += ", ";
      out += SelectItem(sources);
    }
    StrAppend(&out, " FROM ", from);
    if (Chance(rng_, 0.7)) {
      const size_t conditions = 1 + rng_.UniformIndex(3);
      out += " WHERE ";
      for (size_t i = 0; i < conditions; ++i) {
        if (i > 0) out += Chance(rng_, 0.6) ? " AND " : " OR ";
        out += Condition(sources, depth);
      }
    }
    if (Chance(rng_, 0.3)) {
      StrAppend(&out, " GROUP BY ", Column(Pick(sources, rng_)));
      if (Chance(rng_, 0.5)) {
        StrAppend(&out, " HAVING count(*) > ", rng_.UniformIndex(5));
      }
    }
    if (Chance(rng_, 0.3)) {
      StrAppend(&out, " ORDER BY ",
                Chance(rng_, 0.3) ? "count(*)" : Column(Pick(sources, rng_)));
      const uint64_t direction = rng_.UniformIndex(3);
      if (direction == 1) out += " ASC";
      if (direction == 2) out += " DESC";
      if (Chance(rng_, 0.5)) StrAppend(&out, " LIMIT ", 1 + rng_.UniformIndex(5));
    }
    return out;
  }

  const Database& db_;
  Rng& rng_;
};

}  // namespace

std::string RandomQuery(const Database& db, Rng& rng) {
  return Generator(db, rng).Query(0);
}

sql::ColumnMapping RandomRenaming(const Database& db, Rng& rng) {
  sql::ColumnMapping mapping;
  int fresh = 0;
  while (mapping.empty()) {
    for (const Table& table : db.tables) {
      const auto& columns = table.columns;
      if (columns.size() >= 2 && Chance(rng, 0.2)) {
        // Swap two names; a permutation never collides.
        const size_t i = rng.UniformIndex(columns.size());
        size_t j = rng.UniformIndex(columns.size());
        while (j == i) j = rng.UniformIndex(columns.size());
        if (mapping.contains({table.table_id, columns[i].name}) ||
            mapping.contains({table.table_id, columns[j].name})) {
          continue;
        }
        mapping[{table.table_id, columns[i].name}] = columns[j].name;
        mapping[{table.table_id, columns[j].name}] = columns[i].name;
        continue;
      }
      for (const Column& column : columns) {
        if (mapping.contains({table.table_id, column.name}) ||
            !Chance(rng, 0.3)) {
          continue;
        }
        mapping[{table.table_id, column.name}] =
            Chance(rng, 0.5) ? StrCat("renamed_", fresh++)
                             : StrCat(column.name, " v", fresh++);
      }
    }
  }
  return mapping;
}

sql::ColumnMapping InvertRenaming(const sql::ColumnMapping& mapping) {
  sql::ColumnMapping inverse;
  for (const auto& [key, new_name] : mapping) {
    inverse[{key.table_id, new_name}] = key.column;
  }
  return inverse;
}

}  // namespace cta::testing

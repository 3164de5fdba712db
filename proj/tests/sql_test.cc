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

#include <cctype>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "cta/common/rng.h"
#include "cta/common/text.h"
#include "cta/sql/parser.h"
#include "cta/sql/printer.h"
#include "cta/sql/resolver.h"
#include "cta/sql/sql_tools.h"
#include "cta/table/dataset_io.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "support/sql_generator.h"

namespace cta::sql {
namespace {

using ::testing::ElementsAre;
using ::testing::HasSubstr;
using ::testing::IsEmpty;

const std::filesystem::path kTestData = CTA_TESTDATA_DIR;

const Corpus& Fixture() {
  static const Corpus* corpus = [] {
    auto loaded =
        LoadDataset(kTestData / "spider_mini", DatasetFormat::kSpiderLike);
    if (!loaded.ok()) {
      ADD_FAILURE() << loaded.status();
      return new Corpus();
    }
    return new Corpus(*std::move(loaded));
  }();
  return *corpus;
}

const Database& Db(std::string_view id) {
  const Database* db = Fixture().FindDatabase(id);
  if (db == nullptr) ADD_FAILURE() << "no fixture db " << id;
  return *db;
}

// The table of the introductory students example after the RPL rename.
Database StudentsWithNationality() {
  Database db;
  db.db_id = "fig";
  Table table;
  table.table_id = "students";
  table.columns = {{"Student Name", ColumnType::kText, {}},
                   {"Nationality", ColumnType::kText, {}},
                   {"Score", ColumnType::kNumber, {}}};
  db.tables.push_back(table);
  return db;
}

SqlAst MustParse(std::string_view sql, const Database& db) {
  auto ast = ParseAndResolve(sql, db);
  EXPECT_TRUE(ast.ok()) << sql << ": " << ast.status();
  return ast.ok() ? *std::move(ast) : SqlAst();
}

std::string CanonicalText(const SqlAst& ast) {
  auto canonical = Canonicalize(ast);
  EXPECT_TRUE(canonical.ok()) << canonical.status();
  return canonical.ok() ? canonical->text : "";
}

size_t CountRefs(const SqlAst& ast) {
  size_t n = 0;
  ForEachExpr(ast.query, [&](const Expr& e) {
    if (e.kind == ExprKind::kColumn) ++n;
  });
  return n;
}

TEST(TokenizeTest, QuotingConventions) {
  auto tokens = Tokenize("SELECT `a``b`, [c d] FROM t WHERE x = 'it''s' OR y = \"q\"");
  ASSERT_TRUE(tokens.ok()) << tokens.status();
  const auto& t = *tokens;
  EXPECT_EQ(t[1].kind, TokenKind::kQuotedIdent);
  EXPECT_EQ(t[1].text, "a`b");
  EXPECT_EQ(t[3].kind, TokenKind::kQuotedIdent);
  EXPECT_EQ(t[3].text, "c d");
  EXPECT_EQ(t[9].kind, TokenKind::kString);
  EXPECT_EQ(t[9].text, "it's");
  EXPECT_EQ(t[13].kind, TokenKind::kString);
  EXPECT_EQ(t[13].quote, '"');
  EXPECT_EQ(t.back().kind, TokenKind::kEnd);
}

TEST(TokenizeTest, PositionsTrackLines) {
  auto tokens = Tokenize("SELECT a\n  FROM t");
  ASSERT_TRUE(tokens.ok());
  EXPECT_EQ((*tokens)[2].text, "FROM");
  EXPECT_EQ((*tokens)[2].line, 2);
  EXPECT_EQ((*tokens)[2].column, 3);
  EXPECT_EQ((*tokens)[2].offset, 11u);
}

TEST(ParseTest, IntroductoryExampleResolvesTwoRefs) {
  const Database db = StudentsWithNationality();
  SqlAst ast =
      MustParse("SELECT Nationality FROM students WHERE Score > 90", db);
  EXPECT_TRUE(ast.resolved);
  EXPECT_EQ(CountRefs(ast), 2u);
  auto refs = ExtractColumnRefs(ast);
  ASSERT_TRUE(refs.ok());
  EXPECT_THAT(*refs, ElementsAre(ColumnId{"students", "Nationality"},
                                 ColumnId{"students", "Score"}));
}

TEST(ParseTest, StarHasNoExplicitRefs) {
  Database db;
  db.tables.push_back({"t", {}, {}, {}, {{"a", ColumnType::kText, {}}}});
  SqlAst ast = MustParse("SELECT * FROM t", db);
  ASSERT_EQ(ast.query.select.items.size(), 1u);
  EXPECT_EQ(ast.query.select.items[0].expr.kind, ExprKind::kStar);
  EXPECT_EQ(CountRefs(ast), 0u);
  auto refs = ExtractColumnRefs(ast);
  ASSERT_TRUE(refs.ok());
  EXPECT_THAT(*refs, IsEmpty());
  auto count = ExtractColumnRefs(MustParse("SELECT count(*) FROM t", db));
  ASSERT_TRUE(count.ok());
  EXPECT_THAT(*count, IsEmpty());
}

TEST(ParseTest, GrammarErrorsCarryPosition) {
  auto missing = ParseSql("SELECT FROM students");
  ASSERT_TRUE(absl::IsInvalidArgument(missing.status()));
  EXPECT_THAT(std::string(missing.status().message()),
              HasSubstr("line 1, column 8 (offset 7)"));

  auto trailing = ParseSql("SELECT a FROM t WHERE");
  ASSERT_TRUE(absl::IsInvalidArgument(trailing.status()));
  EXPECT_THAT(std::string(trailing.status().message()),
              HasSubstr("end of input"));

  auto unterminated = ParseSql("SELECT a FROM t WHERE b = 'x");
  ASSERT_TRUE(absl::IsInvalidArgument(unterminated.status()));
  EXPECT_THAT(std::string(unterminated.status().message()),
              HasSubstr("column 27"));

  EXPECT_FALSE(ParseSql("").ok());
  EXPECT_FALSE(ParseSql("SELECT a FROM t extra tokens").ok());
  EXPECT_FALSE(ParseSql("SELECT a FROM t WHERE b NOT 3").ok());
}

TEST(ParseTest, SupportedSubset) {
  const Database& school = Db("school");
  for (const char* sql : {
           "SELECT DISTINCT Age FROM students ORDER BY Age DESC LIMIT 3",
           "SELECT count(*), avg(Score), min(Age), max(Age), sum(Score) FROM "
           "students GROUP BY Citizenship HAVING count(*) >= 2",
           "SELECT title FROM courses WHERE course_id NOT IN (SELECT "
           "course_id FROM enrollment)",
           "SELECT title FROM courses WHERE title LIKE '%math%' AND credits "
           "BETWEEN 2 AND 4 OR NOT credits = 1",
           "SELECT T1.title FROM courses AS T1 LEFT JOIN enrollment AS T2 ON "
           "T1.course_id = T2.course_id WHERE T2.grade IS NULL",
           "SELECT Age FROM students UNION SELECT credits FROM courses",
           "SELECT Age FROM students INTERSECT SELECT credits FROM courses",
           "SELECT sub.c FROM (SELECT count(*) AS c FROM students) AS sub",
           "SELECT s.Age FROM students s, enrollment e WHERE s.student_id = "
           "e.student_id",
           "SELECT Citizenship, count(*) AS n FROM students GROUP BY "
           "Citizenship ORDER BY n DESC",
           "SELECT title FROM courses WHERE EXISTS (SELECT grade FROM "
           "enrollment WHERE enrollment.course_id = courses.course_id)",
           "(SELECT Age FROM students) EXCEPT (SELECT credits FROM courses);",
       }) {
    auto ast = ParseAndResolve(sql, school);
    EXPECT_TRUE(ast.ok()) << sql << ": " << ast.status();
    if (ast.ok()) {
      EXPECT_TRUE(ExtractColumnRefs(*ast).ok()) << sql;
    }
  }
}

TEST(ResolveTest, AmbiguousUnqualifiedColumn) {
  auto ast = ParseAndResolve(
      "SELECT student_id FROM students JOIN enrollment ON "
      "students.student_id = enrollment.student_id",
      Db("school"));
  ASSERT_FALSE(ast.ok());
  EXPECT_TRUE(IsAmbiguityError(ast.status())) << ast.status();
  EXPECT_THAT(std::string(ast.status().message()),
              HasSubstr("students, enrollment"));
}

TEST(ResolveTest, UnknownTableAndNestedAggregate) {
  EXPECT_TRUE(absl::IsNotFound(
      ParseAndResolve("SELECT a FROM nowhere", Db("school")).status()));
  EXPECT_TRUE(absl::IsInvalidArgument(
      ParseAndResolve("SELECT max(count(*)) FROM students", Db("school"))
          .status()));
}

TEST(ResolveTest, UnresolvedRefsAreFlagged) {
  SqlAst ast = MustParse("SELECT height, Age FROM students", Db("school"));
  EXPECT_EQ(ast.query.select.items[0].expr.resolution.kind,
            RefKind::kUnresolved);
  EXPECT_EQ(ast.query.select.items[1].expr.resolution.kind, RefKind::kSchema);
  auto refs = ExtractColumnRefs(ast);
  ASSERT_TRUE(absl::IsFailedPrecondition(refs.status()));
  EXPECT_THAT(std::string(refs.status().message()), HasSubstr("height"));
}

TEST(ResolveTest, CorrelatedAndDerivedReferences) {
  SqlAst ast = MustParse(
      "SELECT name FROM players WHERE EXISTS (SELECT match_id FROM matches "
      "WHERE winner = name)",
      Db("sports"));
  const Expr& where = *ast.query.select.where;
  const Expr& inner_where = *where.subquery->select.where;
  EXPECT_EQ(inner_where.args[1].resolution.table_id, "players");

  SqlAst derived = MustParse(
      "SELECT sub.team, sub.n FROM (SELECT team, count(*) AS n FROM players "
      "GROUP BY team) AS sub",
      Db("sports"));
  const auto& items = derived.query.select.items;
  EXPECT_EQ(items[0].expr.resolution.kind, RefKind::kSchema);
  EXPECT_EQ(items[0].expr.resolution.table_id, "players");
  EXPECT_EQ(items[1].expr.resolution.kind, RefKind::kDerived);
  EXPECT_EQ(items[1].expr.resolution.column, "n");
}

// Expected explicit column-reference nodes per fixture gold query, counted
// by hand.
TEST(FixtureTest, AllGoldQueriesParseWithHandCountedRefs) {
  const std::map<std::string, size_t> expected = {
      {"school-1", 2}, {"school-2", 4}, {"school-3", 3}, {"sales-1", 5},
      {"sales-2", 2},  {"sports-1", 4}, {"sports-2", 2}};
  for (const Example& example : Fixture().examples) {
    SqlAst ast = MustParse(example.gold_sql, Db(example.db_id));
    EXPECT_EQ(CountRefs(ast), expected.at(example.example_id))
        << example.example_id;
  }
}

// Token-level resolution oracle: collects the tables named after FROM/JOIN
// with their aliases, then binds every identifier token by alias prefix or
// by unique membership. Independent of the parser and resolver.
std::set<ColumnId> OracleRefs(const std::string& sql, const Database& db) {
  std::vector<std::string> tokens;
  for (size_t i = 0; i < sql.size();) {
    const char c = sql[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '\'' || c == '"') {
      const size_t end = sql.find(c, i + 1);
      tokens.push_back("#literal");
      i = end + 1;
    } else if (c == '`') {
      const size_t end = sql.find('`', i + 1);
      tokens.push_back(sql.substr(i + 1, end - i - 1));
      i = end + 1;
    } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      size_t end = i;
      while (end < sql.size() &&
             (std::isalnum(static_cast<unsigned char>(sql[end])) ||
              sql[end] == '_')) {
        ++end;
      }
      tokens.push_back(sql.substr(i, end - i));
      i = end;
    } else {
      tokens.push_back(std::string(1, c));
      ++i;
    }
  }
  std::map<std::string, const Table*> aliases;
  std::vector<const Table*> tables;
  for (size_t i = 0; i + 1 < tokens.size(); ++i) {
    const std::string kw = CaseFold(tokens[i]);
    if (kw != "from" && kw != "join") continue;
    const Table* table = db.FindTable(tokens[i + 1]);
    if (table == nullptr) continue;
    tables.push_back(table);
    aliases[CaseFold(tokens[i + 1])] = table;
    if (i + 3 < tokens.size() && CaseFold(tokens[i + 2]) == "as") {
      aliases[CaseFold(tokens[i + 3])] = table;
    }
  }
  std::set<ColumnId> out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i + 1 < tokens.size() && tokens[i + 1] == "(") continue;
    if (i + 2 < tokens.size() && tokens[i + 1] == ".") {
      const Table* table = aliases.at(CaseFold(tokens[i]));
      const Column* column = table->FindColumn(tokens[i + 2]);
      if (column != nullptr) out.insert({table->table_id, column->name});
      i += 2;
      continue;
    }
    std::set<ColumnId> candidates;
    for (const Table* table : tables) {
      if (const Column* column = table->FindColumn(tokens[i])) {
        candidates.insert({table->table_id, column->name});
      }
    }
    if (candidates.size() == 1) out.insert(*candidates.begin());
  }
  return out;
}

TEST(FixtureTest, ExtractedRefsMatchTokenOracle) {
  std::vector<std::pair<std::string, std::string>> queries;
  for (const Example& example : Fixture().examples) {
    queries.emplace_back(example.db_id, example.gold_sql);
  }
  queries.emplace_back("school",
                       "SELECT T1.`Student Name`, T2.grade FROM students AS "
                       "T1 JOIN enrollment AS T2 ON T1.student_id = "
                       "T2.student_id WHERE T1.Citizenship = 'France'");
  queries.emplace_back("sports",
                       "SELECT name, height FROM players WHERE team IN "
                       "(SELECT winner FROM matches WHERE year > 2015)");
  queries.emplace_back("sales",
                       "SELECT manager FROM stores ORDER BY city LIMIT 2");
  ASSERT_EQ(queries.size(), 10u);
  for (const auto& [db_id, sql] : queries) {
    const Database& db = Db(db_id);
    auto refs = ExtractColumnRefs(MustParse(sql, db));
    ASSERT_TRUE(refs.ok()) << sql << ": " << refs.status();
    EXPECT_EQ(*refs, OracleRefs(sql, db)) << sql;
  }
}

TEST(RewriteTest, IntroductoryRename) {
  Database db = StudentsWithNationality();
  db.tables[0].columns[1].name = "Citizenship";
  SqlAst ast = MustParse("SELECT Citizenship FROM students", db);
  auto rewritten =
      RewriteColumns(ast, {{{"students", "Citizenship"}, "Nationality"}}, db);
  ASSERT_TRUE(rewritten.ok()) << rewritten.status();
  EXPECT_EQ(ToSql(*rewritten), "SELECT Nationality FROM students");
  auto refs = ExtractColumnRefs(*rewritten);
  ASSERT_TRUE(refs.ok());
  EXPECT_THAT(*refs, ElementsAre(ColumnId{"students", "Nationality"}));
}

TEST(RewriteTest, EmptyMappingIsIdentity) {
  const Database& db = Db("school");
  for (const Example& example : Fixture().examples) {
    if (example.db_id != "school") continue;
    SqlAst ast = MustParse(example.gold_sql, db);
    auto same = RewriteColumns(ast, {}, db);
    ASSERT_TRUE(same.ok());
    EXPECT_EQ(CanonicalText(*same), CanonicalText(ast));
  }
}

TEST(RewriteTest, OnlyMappedReferencesChange) {
  const Database& db = Db("school");
  SqlAst ast = MustParse(
      "SELECT T1.student_id, T2.student_id FROM students AS T1 JOIN "
      "enrollment AS T2 ON T1.student_id = T2.student_id",
      db);
  auto rewritten =
      RewriteColumns(ast, {{{"enrollment", "STUDENT_ID"}, "pupil_id"}}, db);
  ASSERT_TRUE(rewritten.ok()) << rewritten.status();
  EXPECT_EQ(ToSql(*rewritten),
            "SELECT T1.student_id, T2.pupil_id FROM students AS T1 JOIN "
            "enrollment AS T2 ON T1.student_id = T2.pupil_id");
}

TEST(RewriteTest, RejectsCollisionsAndUnknownKeys) {
  const Database& db = Db("school");
  SqlAst ast = MustParse("SELECT Citizenship FROM students", db);
  auto collision =
      RewriteColumns(ast, {{{"students", "Citizenship"}, "SCORE"}}, db);
  EXPECT_TRUE(absl::IsAlreadyExists(collision.status())) << collision.status();
  auto unknown = RewriteColumns(ast, {{{"students", "Height"}, "Tallness"}}, db);
  EXPECT_TRUE(absl::IsNotFound(unknown.status()));
  auto unknown_table = RewriteColumns(ast, {{{"pupils", "Age"}, "Years"}}, db);
  EXPECT_TRUE(absl::IsNotFound(unknown_table.status()));
  auto blank = RewriteColumns(ast, {{{"students", "Age"}, "  "}}, db);
  EXPECT_TRUE(absl::IsInvalidArgument(blank.status()));
}

TEST(RewriteTest, RenameColumnsUpdatesForeignKeys) {
  auto renamed = RenameColumns(Db("school"),
                               {{{"students", "student_id"}, "pupil_id"}});
  ASSERT_TRUE(renamed.ok());
  EXPECT_EQ(renamed->tables[0].columns[0].name, "pupil_id");
  EXPECT_EQ(renamed->foreign_keys[0].ref_column, "pupil_id");
  EXPECT_EQ(renamed->foreign_keys[0].column, "student_id");
}

TEST(RewriteTest, FixtureRoundTripThroughInverse) {
  Rng rng(11);
  for (const Example& example : Fixture().examples) {
    const Database& db = Db(example.db_id);
    SqlAst ast = MustParse(example.gold_sql, db);
    const ColumnMapping mapping = cta::testing::RandomRenaming(db, rng);
    auto renamed_db = RenameColumns(db, mapping);
    ASSERT_TRUE(renamed_db.ok());
    auto forward = RewriteColumns(ast, mapping, db);
    ASSERT_TRUE(forward.ok()) << forward.status();
    // The emitted SQL must bind against the renamed schema.
    SqlAst reparsed = MustParse(ToSql(*forward), *renamed_db);
    EXPECT_EQ(CanonicalText(reparsed), CanonicalText(*forward));
    auto back = RewriteColumns(*forward,
                               cta::testing::InvertRenaming(mapping),
                               *renamed_db);
    ASSERT_TRUE(back.ok()) << back.status();
    EXPECT_EQ(CanonicalText(*back), CanonicalText(ast)) << example.gold_sql;
  }
}

TEST(InvarianceTest, AppendedGradeKeepsScoreBinding) {
  Database db = StudentsWithNationality();
  SqlAst ast = MustParse("SELECT Nationality FROM students WHERE Score > 90", db);
  Table perturbed = db.tables[0];
  perturbed.columns.push_back({"Grade", ColumnType::kNumber, {}});
  auto invariant = CheckAddInvariance(ast, db, perturbed);
  ASSERT_TRUE(invariant.ok()) << invariant.status();
  EXPECT_TRUE(*invariant);
}

TEST(InvarianceTest, DuplicateNameFailsExtensionCheck) {
  Database db = StudentsWithNationality();
  SqlAst ast = MustParse("SELECT Nationality FROM students WHERE Score > 90", db);
  Table perturbed = db.tables[0];
  perturbed.columns.push_back({"score", ColumnType::kNumber, {}});
  EXPECT_TRUE(absl::IsInvalidArgument(
      CheckAddInvariance(ast, db, perturbed).status()));
}

TEST(InvarianceTest, NonExtensionIsRejected) {
  Database db = StudentsWithNationality();
  SqlAst ast = MustParse("SELECT Score FROM students", db);
  Table dropped = db.tables[0];
  dropped.columns.pop_back();
  EXPECT_TRUE(absl::IsFailedPrecondition(
      CheckAddInvariance(ast, db, dropped).status()));
  Table reordered = db.tables[0];
  std::swap(reordered.columns[0], reordered.columns[1]);
  EXPECT_TRUE(absl::IsFailedPrecondition(
      CheckAddInvariance(ast, db, reordered).status()));
}

TEST(InvarianceTest, ShadowingAddedColumnCreatesAmbiguity) {
  const Database& db = Db("school");
  SqlAst ast = MustParse(
      "SELECT title FROM courses JOIN enrollment ON courses.course_id = "
      "enrollment.course_id",
      db);
  Table enrollment = *db.FindTable("enrollment");
  enrollment.columns.push_back({"Title", ColumnType::kText, {}});
  auto invariant = CheckAddInvariance(ast, db, enrollment);
  ASSERT_TRUE(invariant.ok()) << invariant.status();
  EXPECT_FALSE(*invariant);

  Table unrelated = *db.FindTable("enrollment");
  unrelated.columns.push_back({"semester", ColumnType::kText, {}});
  EXPECT_TRUE(*CheckAddInvariance(ast, db, unrelated));
}

TEST(InvarianceTest, CapturedCorrelatedReferenceIsDetected) {
  const Database& db = Db("sports");
  SqlAst ast = MustParse(
      "SELECT name FROM players WHERE EXISTS (SELECT match_id FROM matches "
      "WHERE winner = name)",
      db);
  Table matches = *db.FindTable("matches");
  matches.columns.push_back({"name", ColumnType::kText, {}});
  auto invariant = CheckAddInvariance(ast, db, matches);
  ASSERT_TRUE(invariant.ok()) << invariant.status();
  EXPECT_FALSE(*invariant);
}

TEST(ExactMatchTest, TrivialCases) {
  const Database& db = Db("school");
  const std::string gold = "SELECT Citizenship FROM students WHERE Score > 90";
  EXPECT_TRUE(*ExactMatch(gold, gold, db));
  EXPECT_FALSE(*ExactMatch("SELECT Age FROM students", "SELECT Score FROM students", db));
  EXPECT_FALSE(*ExactMatch("SELECT Citizenship FROM students WHERE Score > 91",
                           gold, db));
  EXPECT_FALSE(*ExactMatch("SELEC Citizenship", gold, db));
  EXPECT_FALSE(*ExactMatch("SELECT x FROM nowhere", gold, db));
  EXPECT_TRUE(absl::IsInvalidArgument(
      ExactMatch(gold, "SELECT FROM", db).status()));
}

TEST(ExactMatchTest, NormalizationsMatch) {
  const Database& db = Db("school");
  const std::vector<std::pair<std::string, std::string>> equal = {
      {"select citizenship from STUDENTS where score > 90",
       "SELECT Citizenship FROM students WHERE Score > 90"},
      {"SELECT Age FROM students WHERE Score > 1 AND Age < 30",
       "SELECT Age FROM students WHERE Age < 30 AND Score > 1"},
      {"SELECT Age FROM students WHERE (Score > 1 AND Age < 3) AND Age > 1",
       "SELECT Age FROM students WHERE Age > 1 AND Score > 1 AND Age < 3"},
      {"SELECT Age FROM students WHERE Age <> 3",
       "SELECT Age FROM students WHERE 3 != Age"},
      {"SELECT Age FROM students ORDER BY Age",
       "SELECT Age FROM students ORDER BY Age ASC"},
      {"SELECT count(*) AS n FROM students", "SELECT COUNT(*) FROM students"},
      {"SELECT Citizenship, count(*) AS n FROM students GROUP BY Citizenship "
       "ORDER BY n DESC",
       "SELECT Citizenship, count(*) FROM students GROUP BY Citizenship "
       "ORDER BY count(*) DESC"},
      {"SELECT s.Age FROM students AS s", "SELECT Age FROM students"},
      {"SELECT Age FROM students WHERE Citizenship = \"x\"",
       "SELECT Age FROM students WHERE Citizenship = 'x'"},
  };
  for (const auto& [a, b] : equal) {
    auto match = ExactMatch(a, b, db);
    ASSERT_TRUE(match.ok()) << match.status();
    EXPECT_TRUE(*match) << a << " vs " << b;
  }
  const std::vector<std::pair<std::string, std::string>> different = {
      {"SELECT Age FROM students WHERE Score - 1 > 2",
       "SELECT Age FROM students WHERE 1 - Score > 2"},
      {"SELECT Age FROM students ORDER BY Age DESC",
       "SELECT Age FROM students ORDER BY Age"},
      {"SELECT Age FROM students WHERE Citizenship = 'X'",
       "SELECT Age FROM students WHERE Citizenship = 'x'"},
      {"SELECT Age FROM students UNION SELECT credits FROM courses",
       "SELECT Age FROM students INTERSECT SELECT credits FROM courses"},
  };
  for (const auto& [a, b] : different) {
    EXPECT_FALSE(*ExactMatch(a, b, db)) << a << " vs " << b;
  }
}

// Swaps every T1/T2 alias in the text; the canonical form must not notice.
std::string SwapAliases(std::string sql) {
  std::string out;
  for (size_t i = 0; i < sql.size(); ++i) {
    if (i + 1 < sql.size() && sql[i] == 'T' &&
        (sql[i + 1] == '1' || sql[i + 1] == '2')) {
      out += 'T';
      out += sql[i + 1] == '1' ? '2' : '1';
      ++i;
    } else {
      out += sql[i];
    }
  }
  return out;
}

TEST(ExactMatchTest, AliasPermutationOracle) {
  int permuted = 0;
  for (const Example& example : Fixture().examples) {
    const std::string swapped = SwapAliases(example.gold_sql);
    if (swapped == example.gold_sql) continue;
    ++permuted;
    auto match = ExactMatch(swapped, example.gold_sql, Db(example.db_id));
    ASSERT_TRUE(match.ok()) << match.status();
    EXPECT_TRUE(*match) << swapped;
  }
  EXPECT_EQ(permuted, 2);
}

TEST(PrinterTest, QuotesOnlyWhenNeeded) {
  EXPECT_EQ(QuoteIdentifier("Score"), "Score");
  EXPECT_EQ(QuoteIdentifier("Student Name"), "`Student Name`");
  EXPECT_EQ(QuoteIdentifier("order"), "`order`");
  EXPECT_EQ(QuoteIdentifier("1st"), "`1st`");
  EXPECT_EQ(QuoteIdentifier("a`b"), "`a``b`");
}

TEST(PrinterTest, ParenthesesFollowPrecedence) {
  auto ast = ParseSql(
      "SELECT a - (b - c), (a + b) * c FROM t WHERE (x = 1 OR y = 2) AND NOT "
      "(z = 3 AND w = 4)");
  ASSERT_TRUE(ast.ok());
  EXPECT_EQ(ToSql(*ast),
            "SELECT a - (b - c), (a + b) * c FROM t WHERE (x = 1 OR y = 2) "
            "AND NOT (z = 3 AND w = 4)");
}

class GeneratedQueryTest : public ::testing::TestWithParam<std::string> {};

// Properties over generated queries: surface round trip, canonical
// idempotence, rename round trip and the elementwise extraction identity.
TEST_P(GeneratedQueryTest, Properties) {
  const Database& db = Db(GetParam());
  Rng rng(DeriveSeed(5, {GetParam()}));
  for (int i = 0; i < 120; ++i) {
    const std::string sql = cta::testing::RandomQuery(db, rng);
    SCOPED_TRACE(sql);
    auto ast = ParseAndResolve(sql, db);
    ASSERT_TRUE(ast.ok()) << ast.status();

    auto printed = ParseAndResolve(ToSql(*ast), db);
    ASSERT_TRUE(printed.ok()) << ToSql(*ast) << ": " << printed.status();
    EXPECT_EQ(CanonicalText(*printed), CanonicalText(*ast));

    auto canonical = Canonicalize(*ast);
    ASSERT_TRUE(canonical.ok());
    SqlAst again_ast{canonical->query, true};
    EXPECT_EQ(CanonicalText(again_ast), canonical->text);
    auto reparsed = ParseAndResolve(canonical->text, db);
    ASSERT_TRUE(reparsed.ok()) << canonical->text << ": " << reparsed.status();
    EXPECT_EQ(CanonicalText(*reparsed), canonical->text);

    const ColumnMapping mapping = cta::testing::RandomRenaming(db, rng);
    auto renamed_db = RenameColumns(db, mapping);
    ASSERT_TRUE(renamed_db.ok());
    auto forward = RewriteColumns(*ast, mapping, db);
    ASSERT_TRUE(forward.ok()) << forward.status();
    auto back = RewriteColumns(*forward, cta::testing::InvertRenaming(mapping),
                               *renamed_db);
    ASSERT_TRUE(back.ok()) << back.status();
    EXPECT_EQ(CanonicalText(*back), CanonicalText(*ast));

    auto refs = ExtractColumnRefs(*ast);
    auto renamed_refs = ExtractColumnRefs(*forward);
    ASSERT_TRUE(refs.ok());
    ASSERT_TRUE(renamed_refs.ok());
    std::set<ColumnId> expected;
    for (const ColumnId& ref : *refs) {
      auto it = mapping.find(ref);
      expected.insert(it == mapping.end()
                          ? ref
                          : ColumnId{ref.table_id, it->second});
    }
    EXPECT_EQ(*renamed_refs, expected);

    auto self = ExactMatch(sql, sql, db);
    ASSERT_TRUE(self.ok());
    EXPECT_TRUE(*self);
  }
}

INSTANTIATE_TEST_SUITE_P(FixtureSchemas, GeneratedQueryTest,
                         ::testing::Values("school", "sales", "sports"));

TEST(ExactMatchTest, EquivalenceOverGeneratedPairs) {
  const Database& db = Db("school");
  Rng rng(99);
  std::vector<std::string> queries;
  for (int i = 0; i < 40; ++i) {
    queries.push_back(cta::testing::RandomQuery(db, rng));
    // Add a reordered twin so positive pairs exist.
    queries.push_back(SwapAliases(queries.back()));
  }
  std::vector<std::vector<bool>> eq(queries.size(),
                                    std::vector<bool>(queries.size()));
  for (size_t i = 0; i < queries.size(); ++i) {
    for (size_t j = 0; j < queries.size(); ++j) {
      auto m = ExactMatch(queries[i], queries[j], db);
      ASSERT_TRUE(m.ok()) << m.status();
      eq[i][j] = *m;
    }
  }
  for (size_t i = 0; i < queries.size(); ++i) {
    EXPECT_TRUE(eq[i][i]);
    for (size_t j = 0; j < queries.size(); ++j) {
      EXPECT_EQ(eq[i][j], eq[j][i]);
      for (size_t k = 0; k < queries.size(); ++k) {
        if (eq[i][j] && eq[j][k]) {
          EXPECT_TRUE(eq[i][k]);
        }
      }
    }
  }
}

TEST(RenameTableTest, SchemaAndForeignKeysFollow) {
  auto renamed = RenameTable(Db("school"), "Courses", "modules");
  ASSERT_TRUE(renamed.ok()) << renamed.status();
  EXPECT_NE(renamed->FindTable("modules"), nullptr);
  EXPECT_EQ(renamed->FindTable("courses"), nullptr);
  bool seen = false;
  for (const ForeignKey& fk : renamed->foreign_keys) {
    EXPECT_NE(NameKey(fk.ref_table_id), "courses");
    seen = seen || fk.ref_table_id == "modules";
  }
  EXPECT_TRUE(seen);
  EXPECT_EQ(RenameTable(Db("school"), "nope", "x").status().code(),
            absl::StatusCode::kNotFound);
  EXPECT_EQ(RenameTable(Db("school"), "courses", "students").status().code(),
            absl::StatusCode::kAlreadyExists);
}

TEST(RenameTableTest, QueriesFollowTheRename) {
  const Database& school = Db("school");
  auto renamed = RenameTable(school, "students", "pupils");
  ASSERT_TRUE(renamed.ok());
  const std::string gold =
      "SELECT students.Citizenship FROM students WHERE students.Age > "
      "(SELECT avg(S.Age) FROM students AS S)";
  auto ast = ParseAndResolve(gold, school);
  ASSERT_TRUE(ast.ok());
  auto rewritten = RewriteTable(*ast, "students", "pupils", *renamed);
  ASSERT_TRUE(rewritten.ok()) << rewritten.status();
  EXPECT_EQ(ToSql(*rewritten),
            "SELECT pupils.Citizenship FROM pupils WHERE pupils.Age > "
            "(SELECT avg(S.Age) FROM pupils AS S)");
  // Canonical forms differ only in the table name.
  std::string canonical = Canonicalize(*rewritten)->text;
  for (size_t at; (at = canonical.find("pupils")) != std::string::npos;) {
    canonical.replace(at, 6, "students");
  }
  EXPECT_EQ(canonical, Canonicalize(*ast)->text);
}

}  // namespace
}  // namespace cta::sql

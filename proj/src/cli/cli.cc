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

#include "cta/cli/cli.h"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <utility>

#include "CLI11.hpp"
#include "cta/attack/attack_harness.h"
#include "cta/common/file_io.h"
#include "cta/common/rng.h"
#include "cta/common/status_macros.h"
#include "cta/common/str_cat.h"
#include "cta/common/text.h"
#include "cta/metrics/metrics.h"
#include "cta/pipeline/pipeline.h"
#include "cta/sidecar/sidecar_client.h"
#include "cta/table/json_codec.h"

namespace cta {
namespace {

enum class Kind { kString, kDouble, kSize, kInt, kU64 };

struct Field {
  const char* key;
  Kind kind;
  // Path-like settings that CTA_* environment variables may override.
  bool env;
  void* (*get)(CliConfig&);
};

#define CTA_FIELD(name, kind, env) \
  Field{#name, kind, env, [](CliConfig& c) -> void* { return &c.name; }}

const Field kFields[] = {
    CTA_FIELD(corpus, Kind::kString, true),
    CTA_FIELD(corpus_format, Kind::kString, false),
    CTA_FIELD(retrieval_corpus, Kind::kString, true),
    CTA_FIELD(retrieval_format, Kind::kString, false),
    CTA_FIELD(annotations, Kind::kString, true),
    CTA_FIELD(embeddings, Kind::kString, true),
    CTA_FIELD(dictionary, Kind::kString, true),
    CTA_FIELD(labels, Kind::kString, true),
    CTA_FIELD(index, Kind::kString, true),
    CTA_FIELD(endpoint, Kind::kString, true),
    CTA_FIELD(stub_scores, Kind::kString, true),
    CTA_FIELD(rpl_threshold, Kind::kDouble, false),
    CTA_FIELD(add_threshold, Kind::kDouble, false),
    CTA_FIELD(k_retrieve, Kind::kSize, false),
    CTA_FIELD(k_rerank, Kind::kSize, false),
    CTA_FIELD(keep_prob, Kind::kDouble, false),
    CTA_FIELD(max_candidates, Kind::kSize, false),
    CTA_FIELD(repeat_limit, Kind::kInt, false),
    CTA_FIELD(seed, Kind::kU64, false),
    CTA_FIELD(threads, Kind::kInt, false),
};

#undef CTA_FIELD

std::string Trim(std::string_view s) {
  const size_t begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return "";
  const size_t end = s.find_last_not_of(" \t\r");
  return std::string(s.substr(begin, end - begin + 1));
}

bool SetField(const Field& field, const std::string& value, CliConfig& c) {
  void* target = field.get(c);
  std::istringstream in(value);
  switch (field.kind) {
    case Kind::kString:
      *static_cast<std::string*>(target) = value;
      return true;
    case Kind::kDouble:
      in >> *static_cast<double*>(target);
      break;
    case Kind::kSize:
      if (value.starts_with('-')) return false;
      in >> *static_cast<size_t*>(target);
      break;
    case Kind::kInt:
      in >> *static_cast<int*>(target);
      break;
    case Kind::kU64:
      if (value.starts_with('-')) return false;
      in >> *static_cast<uint64_t*>(target);
      break;
  }
  return !in.fail() && in.peek() == EOF;
}

std::string Hex(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string StatusCodeName(absl::StatusCode code) {
  return absl::StatusCodeToString(code);
}

// Everything a pipeline command borrows, kept alive for its duration.
struct Loaded {
  Corpus dataset;
  std::vector<Table> retrieval_tables;
  std::unique_ptr<EmbeddingStore> store;
  std::unique_ptr<SidecarClient> client;
  std::unique_ptr<Embedder> embedder;
  std::unique_ptr<TableIndex> index;
  std::unique_ptr<SynonymDictionary> dictionary;
  std::unique_ptr<TpeLabelSet> labels;
  std::unique_ptr<NliScorer> scorer;
  std::optional<Pipeline> pipeline;
};

absl::StatusOr<Corpus> LoadCorpus(const std::string& path,
                                  const std::string& format,
                                  const char* flag) {
  if (path.empty()) {
    return absl::InvalidArgumentError(StrCat("--", flag, " is required"));
  }
  CTA_ASSIGN_OR_RETURN(DatasetFormat f, ParseDatasetFormat(format));
  return LoadDataset(path, f);
}

absl::Status LoadScorer(const CliConfig& c, Loaded& l) {
  if (!c.stub_scores.empty()) {
    CTA_ASSIGN_OR_RETURN(RecordedScorer scorer,
                         RecordedScorer::Load(c.stub_scores));
    l.scorer = std::make_unique<RecordedScorer>(std::move(scorer));
    return absl::OkStatus();
  }
  if (c.endpoint.empty()) {
    return absl::InvalidArgumentError(
        "a scorer is required: pass --stub-scores or --endpoint");
  }
  absl::Status health = l.client->Health();
  if (!health.ok()) {
    return absl::UnavailableError(StrCat("scorer unreachable at ", c.endpoint,
                                         ": ",
                                         std::string(health.message())));
  }
  l.scorer = std::make_unique<HttpNliScorer>(*l.client);
  return absl::OkStatus();
}

absl::Status LoadEmbedder(const CliConfig& c, Loaded& l) {
  if (!c.embeddings.empty()) {
    CTA_ASSIGN_OR_RETURN(EmbeddingStore store,
                         EmbeddingStore::Load(c.embeddings));
    l.store = std::make_unique<EmbeddingStore>(std::move(store));
    l.embedder = std::make_unique<FallbackEmbedder>(*l.store);
  } else if (l.client != nullptr) {
    l.embedder = std::make_unique<HttpEmbedder>(*l.client);
  }
  return absl::OkStatus();
}

std::vector<Table> Flatten(const Corpus& corpus) {
  std::vector<Table> tables;
  for (const Database& db : corpus.databases) {
    for (const Table& t : db.tables) tables.push_back(t);
  }
  return tables;
}

absl::Status LoadPipeline(const CliConfig& c, Loaded& l) {
  CTA_RETURN_IF_ERROR(ValidateConfig(c));
  CTA_ASSIGN_OR_RETURN(l.dataset, LoadCorpus(c.corpus, c.corpus_format, "corpus"));
  if (!c.endpoint.empty()) {
    l.client = std::make_unique<SidecarClient>(SidecarOptions{.endpoint = c.endpoint});
  }
  CTA_RETURN_IF_ERROR(LoadScorer(c, l));
  CTA_RETURN_IF_ERROR(LoadEmbedder(c, l));
  if (!c.retrieval_corpus.empty()) {
    CTA_ASSIGN_OR_RETURN(
        Corpus retrieval,
        LoadCorpus(c.retrieval_corpus, c.retrieval_format, "retrieval-corpus"));
    l.retrieval_tables = Flatten(retrieval);
    if (!c.index.empty()) {
      CTA_ASSIGN_OR_RETURN(TableIndex index, TableIndex::Load(c.index));
      l.index = std::make_unique<TableIndex>(std::move(index));
    } else {
      if (l.embedder == nullptr) {
        return absl::InvalidArgumentError(
            "retrieval needs --embeddings or --endpoint to embed tables");
      }
      CTA_ASSIGN_OR_RETURN(
          TableIndex index,
          TableIndex::Build(l.retrieval_tables, *l.embedder,
                            {.threads = c.threads}));
      l.index = std::make_unique<TableIndex>(std::move(index));
    }
  } else if (!c.index.empty()) {
    return absl::InvalidArgumentError(
        "--index needs --retrieval-corpus to resolve table ids");
  }
  if (!c.dictionary.empty()) {
    CTA_ASSIGN_OR_RETURN(SynonymDictionary dictionary,
                         SynonymDictionary::Load(c.dictionary));
    l.dictionary = std::make_unique<SynonymDictionary>(std::move(dictionary));
  }
  if (!c.labels.empty()) {
    CTA_ASSIGN_OR_RETURN(TpeLabelSet labels, TpeLabelSet::Load(c.labels));
    l.labels = std::make_unique<TpeLabelSet>(std::move(labels));
  }
  PipelineResources resources{.index = l.index.get(),
                              .retrieval_corpus = l.retrieval_tables,
                              .embedder = l.embedder.get(),
                              .store = l.store.get(),
                              .dictionary = l.dictionary.get(),
                              .scorer = l.scorer.get(),
                              .labels = l.labels.get()};
  PipelineConfig config{.k_retrieve = c.k_retrieve,
                        .k_rerank = c.k_rerank,
                        .rpl_threshold = c.rpl_threshold,
                        .add_threshold = c.add_threshold,
                        .word_level = {.max_candidates = c.max_candidates,
                                       .keep_prob = c.keep_prob,
                                       .repeat_limit = c.repeat_limit},
                        .seed = c.seed,
                        .threads = c.threads};
  CTA_ASSIGN_OR_RETURN(Pipeline pipeline, Pipeline::Create(resources, config));
  l.pipeline.emplace(std::move(pipeline));
  return absl::OkStatus();
}

absl::Status RequireFlag(const std::string& value, const char* flag) {
  if (value.empty()) {
    return absl::InvalidArgumentError(StrCat("--", flag, " is required"));
  }
  return absl::OkStatus();
}

absl::StatusOr<std::string> DirectoryDigest(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file()) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::string all;
  for (const auto& file : files) {
    CTA_ASSIGN_OR_RETURN(std::string bytes, ReadFile(file));
    StrAppend(&all, file.filename().string(), "\n", bytes.size(), "\n", bytes);
  }
  return Hex(StableHash(all));
}

struct Flags {
  std::string out;
  std::string out_format;
  bool audit = false;
  std::string kind = "rpl";
  std::string run;
  std::string predictions;
  std::string runs;
  double dev_em = 0;
  std::string mode = "range";
  std::string label;
  bool json = false;
  bool annotated_only = false;
  std::string gold;
  std::string pred;
};

absl::Status IndexBuild(const CliConfig& c, const Flags& f, std::ostream& out) {
  CTA_RETURN_IF_ERROR(ValidateConfig(c));
  CTA_RETURN_IF_ERROR(RequireFlag(f.out, "out"));
  Loaded l;
  CTA_ASSIGN_OR_RETURN(Corpus corpus, LoadCorpus(c.retrieval_corpus,
                                                 c.retrieval_format,
                                                 "retrieval-corpus"));
  l.retrieval_tables = Flatten(corpus);
  if (!c.endpoint.empty()) {
    l.client = std::make_unique<SidecarClient>(SidecarOptions{.endpoint = c.endpoint});
    if (c.embeddings.empty()) {
      absl::Status health = l.client->Health();
      if (!health.ok()) {
        return absl::UnavailableError(StrCat("embedder unreachable at ",
                                             c.endpoint, ": ",
                                             std::string(health.message())));
      }
    }
  }
  CTA_RETURN_IF_ERROR(LoadEmbedder(c, l));
  if (l.embedder == nullptr) {
    return absl::InvalidArgumentError("pass --embeddings or --endpoint");
  }
  IndexBuildReport report;
  CTA_ASSIGN_OR_RETURN(TableIndex index,
                       TableIndex::Build(l.retrieval_tables, *l.embedder,
                                         {.threads = c.threads}, &report));
  CTA_RETURN_IF_ERROR(index.Save(f.out));
  CTA_ASSIGN_OR_RETURN(std::string bytes, ReadFile(f.out));
  Json summary;
  summary["tables"] = index.size();
  summary["dims"] = index.dims();
  summary["failures"] = report.failures;
  summary["digest"] = Hex(StableHash(bytes));
  out << summary.dump() << "\n";
  return absl::OkStatus();
}

absl::Status Perturb(const CliConfig& c, const Flags& f, std::ostream& out) {
  CTA_RETURN_IF_ERROR(RequireFlag(f.out, "out"));
  Loaded l;
  CTA_RETURN_IF_ERROR(LoadPipeline(c, l));
  const std::vector<TargetRef> targets = AllTargets(l.dataset.databases);
  const auto results = l.pipeline->GenerateAll(targets);
  std::string lines;
  size_t rpl = 0, add = 0;
  for (size_t i = 0; i < results.size(); ++i) {
    if (!results[i].ok()) return results[i].status();
    const CandidateBuckets& buckets = *results[i];
    if (f.audit) {
      CTA_RETURN_IF_ERROR(AuditBuckets(buckets, *targets[i].table,
                                       l.pipeline->scorer(),
                                       l.pipeline->config()));
    }
    rpl += buckets.rpl.size();
    add += buckets.add.size();
    StrAppend(&lines, BucketsToJson(buckets).dump(), "\n");
  }
  CTA_RETURN_IF_ERROR(WriteFileAtomic(f.out, lines));
  Json summary;
  summary["targets"] = results.size();
  summary["rpl_candidates"] = rpl;
  summary["add_candidates"] = add;
  summary["digest"] = Hex(StableHash(lines));
  out << summary.dump() << "\n";
  return absl::OkStatus();
}

absl::Status Augment(const CliConfig& c, const Flags& f, std::ostream& out) {
  CTA_RETURN_IF_ERROR(RequireFlag(f.out, "out"));
  CTA_ASSIGN_OR_RETURN(
      DatasetFormat format,
      ParseDatasetFormat(f.out_format.empty() ? c.corpus_format : f.out_format));
  Loaded l;
  CTA_RETURN_IF_ERROR(LoadPipeline(c, l));
  CTA_ASSIGN_OR_RETURN(
      AugmentResult result,
      AugmentTraining(l.dataset, *l.pipeline,
                      {.rename_single_tables =
                           format == DatasetFormat::kSingleTable}));
  CTA_RETURN_IF_ERROR(WriteAugmentResult(result, f.out, format));
  Json summary = SummaryToJson(result.summary);
  CTA_ASSIGN_OR_RETURN(summary["digest"], DirectoryDigest(f.out));
  out << summary.dump() << "\n";
  return absl::OkStatus();
}

absl::Status AttackSample(const CliConfig& c, const Flags& f,
                          std::ostream& out) {
  CTA_RETURN_IF_ERROR(RequireFlag(f.out, "out"));
  CTA_RETURN_IF_ERROR(RequireFlag(c.annotations, "annotations"));
  CTA_ASSIGN_OR_RETURN(AttackKind kind, ParseAttackKind(f.kind));
  CTA_ASSIGN_OR_RETURN(Corpus dataset,
                       LoadCorpus(c.corpus, c.corpus_format, "corpus"));
  CTA_ASSIGN_OR_RETURN(auto annotations,
                       LoadAnnotations(c.annotations, dataset.databases));
  CTA_ASSIGN_OR_RETURN(AttackRun run,
                       SampleAttackSet(dataset, annotations, kind, c.seed));
  CTA_RETURN_IF_ERROR(SaveAttackRun(run, f.out));
  CTA_ASSIGN_OR_RETURN(std::string bytes, ReadFile(f.out));
  Json summary;
  summary["kind"] = AttackKindName(kind);
  summary["seed"] = c.seed;
  summary["examples"] = run.examples.size();
  summary["flagged"] = run.flagged();
  summary["skipped"] = run.skipped;
  summary["digest"] = Hex(StableHash(bytes));
  out << summary.dump() << "\n";
  return absl::OkStatus();
}

absl::Status AttackEvaluate(const CliConfig& c, const Flags& f,
                            std::ostream& out) {
  CTA_RETURN_IF_ERROR(ValidateConfig(c));
  CTA_RETURN_IF_ERROR(RequireFlag(f.run, "run"));
  CTA_RETURN_IF_ERROR(RequireFlag(f.predictions, "predictions"));
  CTA_ASSIGN_OR_RETURN(AttackRun run, LoadAttackRun(f.run));
  CTA_ASSIGN_OR_RETURN(Predictions predictions, LoadPredictions(f.predictions));
  CTA_ASSIGN_OR_RETURN(EvalResult result,
                       Evaluate(run, predictions, c.threads));
  const std::string text = EvalResultToJson(result).dump();
  if (!f.out.empty()) {
    CTA_RETURN_IF_ERROR(WriteFileAtomic(f.out, text + "\n"));
  }
  out << text << "\n";
  return absl::OkStatus();
}

// Seed EMs from either {"dev_em"?, "seed_ems": [...]} or an array of
// evaluation results ({"em": ...}).
absl::Status ReadRuns(const std::string& path, std::optional<double>& dev_em,
                      std::vector<double>& seed_ems) {
  CTA_ASSIGN_OR_RETURN(std::string text, ReadFile(path));
  const Json json = Json::parse(text, nullptr, false);
  const auto bad = [&] {
    return absl::InvalidArgumentError(
        StrCat(path, ": expected {\"seed_ems\": [...]} or an array of "
                     "evaluation results"));
  };
  if (json.is_object() && json.contains("seed_ems") &&
      json["seed_ems"].is_array()) {
    for (const Json& v : json["seed_ems"]) {
      if (!v.is_number()) return bad();
      seed_ems.push_back(v.get<double>());
    }
    if (json.contains("dev_em")) {
      if (!json["dev_em"].is_number()) return bad();
      dev_em = json["dev_em"].get<double>();
    }
    return absl::OkStatus();
  }
  if (json.is_array()) {
    for (const Json& v : json) {
      if (!v.is_object() || !v.contains("em") || !v["em"].is_number()) {
        return bad();
      }
      seed_ems.push_back(v["em"].get<double>());
    }
    return absl::OkStatus();
  }
  return bad();
}

absl::Status AttackReport(const Flags& f, bool dev_given, std::ostream& out) {
  CTA_RETURN_IF_ERROR(RequireFlag(f.runs, "runs"));
  std::optional<double> dev_em;
  std::vector<double> seed_ems;
  CTA_RETURN_IF_ERROR(ReadRuns(f.runs, dev_em, seed_ems));
  if (dev_given) dev_em = f.dev_em;
  if (!dev_em) {
    return absl::InvalidArgumentError(
        "--dev-em is required when the runs file has no dev_em");
  }
  FluctuationMode mode;
  if (f.mode == "range") {
    mode = FluctuationMode::kRange;
  } else if (f.mode == "stddev") {
    mode = FluctuationMode::kStddev;
  } else {
    return absl::InvalidArgumentError(
        StrCat("unknown fluctuation mode: ", f.mode));
  }
  CTA_ASSIGN_OR_RETURN(EvalReport report, Aggregate(*dev_em, seed_ems, mode));
  if (f.json) {
    out << EvalReportToJson(report).dump() << "\n";
    return absl::OkStatus();
  }
  const std::pair<std::string, EvalReport> rows[] = {
      {f.label.empty() ? std::filesystem::path(f.runs).stem().string()
                       : f.label,
       report}};
  out << RenderReportTable(rows);
  return absl::OkStatus();
}

absl::Status Stats(const CliConfig& c, const Flags& f, std::ostream& out) {
  CTA_ASSIGN_OR_RETURN(Corpus dataset,
                       LoadCorpus(c.corpus, c.corpus_format, "corpus"));
  std::vector<AdvetaAnnotation> annotations;
  if (!c.annotations.empty()) {
    CTA_ASSIGN_OR_RETURN(annotations,
                         LoadAnnotations(c.annotations, dataset.databases));
  }
  CTA_ASSIGN_OR_RETURN(
      StatReport report,
      CorpusStats(dataset.databases, annotations,
                  {.original_annotated_only = f.annotated_only}));
  if (f.json) {
    out << StatReportToJson(report).dump() << "\n";
  } else {
    out << RenderStatReport(report);
  }
  return absl::OkStatus();
}

absl::Status LinkEval(const Flags& f, std::ostream& out) {
  CTA_RETURN_IF_ERROR(RequireFlag(f.gold, "gold"));
  CTA_RETURN_IF_ERROR(RequireFlag(f.pred, "pred"));
  CTA_ASSIGN_OR_RETURN(LinkFile gold, LoadLinkFile(f.gold));
  CTA_ASSIGN_OR_RETURN(LinkFile pred, LoadLinkFile(f.pred));
  CTA_ASSIGN_OR_RETURN(LinkingScores scores, LinkingPrf(gold, pred));
  out << LinkingScoresToJson(scores).dump() << "\n";
  return absl::OkStatus();
}

void PrintError(std::ostream& err, std::string_view code,
                std::string_view message) {
  Json json;
  json["error"]["code"] = code;
  json["error"]["message"] = message;
  err << json.dump() << "\n";
}

// Finds --config before flag parsing so that flags can override it.
std::optional<std::string> ConfigPath(const std::vector<std::string>& args) {
  for (size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) return args[i + 1];
    if (args[i].starts_with("--config=")) return args[i].substr(9);
  }
  return std::nullopt;
}

}  // namespace

int ExitCodeFor(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kOk:
      return kExitOk;
    case absl::StatusCode::kNotFound:
      return kExitNotFound;
    case absl::StatusCode::kUnavailable:
    case absl::StatusCode::kDeadlineExceeded:
      return kExitScorerUnreachable;
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kFailedPrecondition:
    case absl::StatusCode::kAlreadyExists:
    case absl::StatusCode::kOutOfRange:
      return kExitInvalidData;
    default:
      return kExitFailure;
  }
}

absl::Status ApplyConfigText(std::string_view text, std::string_view source,
                             CliConfig& config) {
  size_t line_no = 0;
  for (std::string_view rest = text; !rest.empty();) {
    const size_t end = rest.find('\n');
    std::string_view line = rest.substr(0, end);
    rest = end == std::string_view::npos ? std::string_view()
                                         : rest.substr(end + 1);
    ++line_no;
    const std::string locus = StrCat(source, ":", line_no);
    std::string content = Trim(line);
    if (content.empty() || content[0] == '#') continue;
    const size_t eq = content.find('=');
    if (eq == std::string::npos) {
      return absl::InvalidArgumentError(
          StrCat(locus, ": expected key = value"));
    }
    const std::string key = Trim(std::string_view(content).substr(0, eq));
    std::string value = Trim(std::string_view(content).substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    } else if (const size_t hash = value.find('#');
               hash != std::string::npos) {
      value = Trim(std::string_view(value).substr(0, hash));
    }
    const Field* field = nullptr;
    for (const Field& f : kFields) {
      if (key == f.key) field = &f;
    }
    if (field == nullptr) {
      return absl::InvalidArgumentError(
          StrCat(locus, ": unknown key \"", key, "\""));
    }
    if (!SetField(*field, value, config)) {
      return absl::InvalidArgumentError(
          StrCat(locus, ": bad value for ", key, ": \"", value, "\""));
    }
  }
  return absl::OkStatus();
}

void ApplyEnvironment(const EnvLookup& getenv, CliConfig& config) {
  for (const Field& field : kFields) {
    if (!field.env) continue;
    std::string name = StrCat("CTA_", field.key);
    for (char& ch : name) ch = static_cast<char>(std::toupper(ch));
    const char* value = getenv(name.c_str());
    if (value != nullptr && *value != '\0') {
      *static_cast<std::string*>(field.get(config)) = value;
    }
  }
}

absl::Status ValidateConfig(const CliConfig& c) {
  for (const auto& [name, value] :
       {std::pair{"rpl_threshold", c.rpl_threshold},
        std::pair{"add_threshold", c.add_threshold},
        std::pair{"keep_prob", c.keep_prob}}) {
    if (!(value >= 0 && value <= 1)) {
      return absl::InvalidArgumentError(
          StrCat(name, " must lie in [0, 1], got ", value));
    }
  }
  if (c.k_retrieve == 0 || c.k_rerank == 0) {
    return absl::InvalidArgumentError("k_retrieve and k_rerank must be positive");
  }
  if (c.threads < 1) {
    return absl::InvalidArgumentError("threads must be at least 1");
  }
  if (c.repeat_limit < 1) {
    return absl::InvalidArgumentError("repeat_limit must be at least 1");
  }
  return absl::OkStatus();
}

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err, const EnvLookup& getenv) {
  CliConfig config;
  if (auto path = ConfigPath(args)) {
    auto text = ReadFile(*path);
    if (!text.ok()) {
      PrintError(err, StatusCodeName(text.status().code()),
                 std::string(text.status().message()));
      return ExitCodeFor(text.status());
    }
    absl::Status status = ApplyConfigText(*text, *path, config);
    if (!status.ok()) {
      PrintError(err, "usage", std::string(status.message()));
      return kExitUsage;
    }
  }
  ApplyEnvironment(getenv ? getenv : EnvLookup(&std::getenv), config);

  Flags flags;
  std::string config_path;
  CLI::App app("Contextualized table augmentation for Text-to-SQL.", "cta");
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  const auto common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "key = value settings file");
    cmd->add_option("--corpus", config.corpus, "Dataset to perturb");
    cmd->add_option("--corpus-format", config.corpus_format,
                    "spider_like or single_table");
    cmd->add_option("--seed", config.seed, "Global seed");
    cmd->add_option("--threads", config.threads, "Worker threads");
  };
  const auto pipeline = [&](CLI::App* cmd) {
    common(cmd);
    cmd->add_option("--retrieval-corpus", config.retrieval_corpus,
                    "Tables candidates are retrieved from");
    cmd->add_option("--retrieval-format", config.retrieval_format,
                    "spider_like or single_table");
    cmd->add_option("--index", config.index, "Prebuilt table index");
    cmd->add_option("--embeddings", config.embeddings, "Word vectors");
    cmd->add_option("--dictionary", config.dictionary, "Synonym dictionary");
    cmd->add_option("--labels", config.labels, "TPE label list");
    cmd->add_option("--endpoint", config.endpoint, "Inference sidecar URL");
    cmd->add_option("--stub-scores", config.stub_scores,
                    "Recorded NLI scores used instead of the sidecar");
    cmd->add_option("--rpl-threshold", config.rpl_threshold);
    cmd->add_option("--add-threshold", config.add_threshold);
    cmd->add_option("--k-retrieve", config.k_retrieve);
    cmd->add_option("--k-rerank", config.k_rerank);
    cmd->add_option("--keep-prob", config.keep_prob);
    cmd->add_option("--max-candidates", config.max_candidates);
    cmd->add_option("--repeat-limit", config.repeat_limit);
  };

  CLI::App* index = app.add_subcommand("index", "Table index operations");
  index->require_subcommand(1);
  CLI::App* index_build = index->add_subcommand("build", "Embed and index a corpus");
  common(index_build);
  index_build->add_option("--retrieval-corpus", config.retrieval_corpus);
  index_build->add_option("--retrieval-format", config.retrieval_format);
  index_build->add_option("--embeddings", config.embeddings);
  index_build->add_option("--endpoint", config.endpoint);
  index_build->add_option("--out", flags.out, "Index file")->required();

  CLI::App* perturb = app.add_subcommand("perturb", "Write RPL/ADD buckets for every column");
  pipeline(perturb);
  perturb->add_option("--out", flags.out, "Buckets JSONL")->required();
  perturb->add_flag("--audit", flags.audit, "Re-check every bucket");

  CLI::App* augment = app.add_subcommand("augment", "Build an augmented training set");
  pipeline(augment);
  augment->add_option("--out", flags.out, "Output directory")->required();
  augment->add_option("--out-format", flags.out_format,
                      "Defaults to the corpus format");

  CLI::App* attack = app.add_subcommand("attack", "Attack sets and scoring");
  attack->require_subcommand(1);
  CLI::App* sample = attack->add_subcommand("sample", "Sample one attack run");
  common(sample);
  sample->add_option("--annotations", config.annotations);
  sample->add_option("--kind", flags.kind, "rpl or add");
  sample->add_option("--out", flags.out, "Run file")->required();
  CLI::App* evaluate = attack->add_subcommand("evaluate", "Score predictions on a run");
  common(evaluate);
  evaluate->add_option("--run", flags.run)->required();
  evaluate->add_option("--predictions", flags.predictions)->required();
  evaluate->add_option("--out", flags.out, "Result file");
  CLI::App* report = attack->add_subcommand("report", "Aggregate seed runs");
  report->add_option("--config", config_path);
  CLI::Option* dev_opt = report->add_option("--dev-em", flags.dev_em);
  report->add_option("--runs", flags.runs)->required();
  report->add_option("--mode", flags.mode, "range or stddev");
  report->add_option("--label", flags.label);
  report->add_flag("--json", flags.json);

  CLI::App* stats = app.add_subcommand("stats", "Corpus statistics");
  common(stats);
  stats->add_option("--annotations", config.annotations);
  stats->add_flag("--annotated-only", flags.annotated_only,
                  "Count original columns over annotated ones only");
  stats->add_flag("--json", flags.json);

  CLI::App* link_eval = app.add_subcommand("link-eval", "Schema-linking P/R/F");
  link_eval->add_option("--gold", flags.gold)->required();
  link_eval->add_option("--pred", flags.pred)->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    for (const CLI::App* sub : app.get_subcommands()) out << sub->help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    PrintError(err, "usage", e.what());
    return kExitUsage;
  }

  absl::Status status;
  if (index_build->parsed()) {
    status = IndexBuild(config, flags, out);
  } else if (perturb->parsed()) {
    status = Perturb(config, flags, out);
  } else if (augment->parsed()) {
    status = Augment(config, flags, out);
  } else if (sample->parsed()) {
    status = AttackSample(config, flags, out);
  } else if (evaluate->parsed()) {
    status = AttackEvaluate(config, flags, out);
  } else if (report->parsed()) {
    status = AttackReport(flags, dev_opt->count() > 0, out);
  } else if (stats->parsed()) {
    status = Stats(config, flags, out);
  } else if (link_eval->parsed()) {
    status = LinkEval(flags, out);
  }
  if (!status.ok()) {
    PrintError(err, StatusCodeName(status.code()),
               std::string(status.message()));
    return ExitCodeFor(status);
  }
  return kExitOk;
}

}  // namespace cta

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

#include "cta/nli_gate/nli_gate.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "cta/common/file_io.h"
#include "cta/common/str_cat.h"
#include "cta/common/text.h"
#include "json.hpp"

namespace cta {
namespace {

constexpr const char* kDefaultLabels[] = {
    "student",          "teacher",
    "athlete",          "actor",
    "artist",           "author",
    "politician",       "scientist",
    "soldier",          "employee",
    "company",          "university",
    "school",           "sports team",
    "government agency", "political party",
    "media organization", "religious organization",
    "city",             "country",
    "island",           "mountain",
    "river",            "park",
    "road",             "airport",
    "hospital",         "hotel",
    "library",          "restaurant",
    "stadium",          "theater",
    "film",             "music album",
    "song",             "book",
    "painting",         "broadcast program",
    "car",              "airplane",
    "ship",             "software",
    "game",             "food",
    "sports event",     "election",
    "war",              "disaster",
};
static_assert(std::size(kDefaultLabels) == kTpeLabelCount);

absl::StatusOr<NliScores> ScoresFromJson(const nlohmann::json& json,
                                         std::string_view locus) {
  NliScores scores;
  for (auto [key, field] : {std::pair{"entail", &scores.entail},
                            std::pair{"neutral", &scores.neutral},
                            std::pair{"contradict", &scores.contradict}}) {
    if (!json.contains(key) || !json[key].is_number()) {
      return absl::InvalidArgumentError(
          StrCat(locus, ": missing numeric \"", key, "\""));
    }
    *field = json[key].get<double>();
  }
  if (json.contains("entail_logit")) {
    if (!json["entail_logit"].is_number()) {
      return absl::InvalidArgumentError(
          StrCat(locus, ": \"entail_logit\" is not a number"));
    }
    scores.entail_logit = json["entail_logit"].get<double>();
  } else if (scores.entail > 0) {
    scores.entail_logit = std::log(scores.entail);
  } else {
    return absl::InvalidArgumentError(
        StrCat(locus, ": entail is 0 and no entail_logit is given"));
  }
  if (auto s = ValidateNliScores(scores); !s.ok()) {
    return absl::InvalidArgumentError(StrCat(locus, ": ", s.message()));
  }
  return scores;
}

}  // namespace

absl::Status ValidateNliScores(const NliScores& scores) {
  for (double p : {scores.entail, scores.neutral, scores.contradict}) {
    if (!(p >= 0 && p <= 1)) {
      return absl::InvalidArgumentError(
          StrCat("NLI probability ", p, " is outside [0, 1]"));
    }
  }
  const double sum = scores.entail + scores.neutral + scores.contradict;
  if (std::abs(sum - 1) > 1e-6) {
    return absl::InvalidArgumentError(
        StrCat("NLI probabilities sum to ", sum, ", not 1"));
  }
  if (!std::isfinite(scores.entail_logit)) {
    return absl::InvalidArgumentError("NLI entail_logit is not finite");
  }
  return absl::OkStatus();
}

absl::StatusOr<std::vector<NliScores>> NliScorer::ScoreBatch(
    std::span<const TextPair> pairs) const {
  std::vector<NliScores> out;
  out.reserve(pairs.size());
  for (const auto& [premise, hypothesis] : pairs) {
    auto scores = Score(premise, hypothesis);
    if (!scores.ok()) return scores.status();
    out.push_back(*scores);
  }
  return out;
}

RecordedScorer::RecordedScorer(std::map<TextPair, NliScores> recorded,
                               NliScores fallback)
    : recorded_(recorded.begin(), recorded.end()), fallback_(fallback) {}

RecordedScorer::RecordedScorer(const RecordedScorer& other)
    : recorded_(other.recorded_),
      fallback_(other.fallback_),
      default_hits_(other.default_hits_.load()) {}

absl::StatusOr<RecordedScorer> RecordedScorer::Parse(std::string_view json_text,
                                                     std::string_view source) {
  nlohmann::json json = nlohmann::json::parse(json_text, nullptr, false);
  if (json.is_discarded() || !json.is_object()) {
    return absl::InvalidArgumentError(
        StrCat(source, ": recorded scores must be a JSON object"));
  }
  NliScores fallback = kDefaultScores;
  if (json.contains("default")) {
    auto parsed = ScoresFromJson(json["default"], StrCat(source, ": default"));
    if (!parsed.ok()) return parsed.status();
    fallback = *parsed;
  }
  std::map<TextPair, NliScores> recorded;
  if (json.contains("pairs")) {
    if (!json["pairs"].is_array()) {
      return absl::InvalidArgumentError(
          StrCat(source, ": \"pairs\" is not an array"));
    }
    size_t i = 0;
    for (const auto& pair : json["pairs"]) {
      const std::string locus = StrCat(source, ": pairs[", i++, "]");
      if (!pair.is_object() || !pair.contains("premise") ||
          !pair["premise"].is_string() || !pair.contains("hypothesis") ||
          !pair["hypothesis"].is_string()) {
        return absl::InvalidArgumentError(
            StrCat(locus, ": needs string premise and hypothesis"));
      }
      auto scores = ScoresFromJson(pair, locus);
      if (!scores.ok()) return scores.status();
      TextPair key{pair["premise"].get<std::string>(),
                   pair["hypothesis"].get<std::string>()};
      if (!recorded.emplace(key, *scores).second) {
        return absl::InvalidArgumentError(
            StrCat(locus, ": pair (\"", key.first, "\", \"", key.second,
                   "\") recorded twice"));
      }
    }
  }
  return RecordedScorer(std::move(recorded), fallback);
}

absl::StatusOr<RecordedScorer> RecordedScorer::Load(
    const std::filesystem::path& path) {
  auto text = ReadFile(path);
  if (!text.ok()) return text.status();
  return Parse(*text, path.filename().string());
}

absl::StatusOr<NliScores> RecordedScorer::Score(
    std::string_view premise, std::string_view hypothesis) const {
  auto it = recorded_.find(
      std::pair<std::string_view, std::string_view>(premise, hypothesis));
  if (it != recorded_.end()) return it->second;
  default_hits_.fetch_add(1);
  return fallback_;
}

std::string BuildContext(std::string_view tpe, const Column& column) {
  return StrCat(CollapseWhitespace(tpe), " ", CollapseWhitespace(column.name),
                " (", ColumnTypeName(column.type), ").");
}

absl::StatusOr<Entailment> BidirectionalEntailment(std::string_view a_ctx,
                                                   std::string_view b_ctx,
                                                   const NliScorer& scorer) {
  if (IsBlank(a_ctx) || IsBlank(b_ctx)) {
    return absl::InvalidArgumentError("entailment context is blank");
  }
  const TextPair pairs[] = {{std::string(a_ctx), std::string(b_ctx)},
                            {std::string(b_ctx), std::string(a_ctx)}};
  auto scores = scorer.ScoreBatch(pairs);
  if (!scores.ok()) return scores.status();
  if (scores->size() != 2) {
    return absl::InternalError("scorer returned the wrong number of scores");
  }
  return Entailment{(*scores)[0].entail, (*scores)[1].entail};
}

bool DecideRpl(double e1, double e2, double threshold) {
  return std::min(e1, e2) >= threshold;
}

bool DecideRpl(const Entailment& entailment, double threshold) {
  return DecideRpl(entailment.e1, entailment.e2, threshold);
}

absl::StatusOr<AddDecision> DecideAdd(std::string_view candidate_ctx,
                                      std::span<const std::string> original_ctxs,
                                      const NliScorer& scorer,
                                      double threshold) {
  if (original_ctxs.empty()) {
    return absl::InvalidArgumentError("ADD decision needs original columns");
  }
  if (IsBlank(candidate_ctx)) {
    return absl::InvalidArgumentError("entailment context is blank");
  }
  std::vector<TextPair> pairs;
  pairs.reserve(original_ctxs.size() * 2);
  for (const std::string& original : original_ctxs) {
    if (IsBlank(original)) {
      return absl::InvalidArgumentError("entailment context is blank");
    }
    pairs.emplace_back(std::string(candidate_ctx), original);
    pairs.emplace_back(original, std::string(candidate_ctx));
  }
  auto scores = scorer.ScoreBatch(pairs);
  if (!scores.ok()) return scores.status();
  if (scores->size() != pairs.size()) {
    return absl::InternalError("scorer returned the wrong number of scores");
  }
  AddDecision decision;
  decision.margin = 1;
  for (size_t i = 0; i < original_ctxs.size(); ++i) {
    const Entailment entailment{(*scores)[2 * i].entail,
                                (*scores)[2 * i + 1].entail};
    decision.pairs.push_back(entailment);
    const double worst = std::max(entailment.e1, entailment.e2);
    decision.margin = std::min(decision.margin, 1 - worst);
    if (worst > threshold && !decision.first_conflict.has_value()) {
      decision.first_conflict = i;
    }
  }
  decision.accept = !decision.first_conflict.has_value();
  return decision;
}

absl::StatusOr<TpeLabelSet> TpeLabelSet::Parse(std::string_view text,
                                               std::string_view source) {
  TpeLabelSet set;
  std::set<std::string> seen;
  int line_number = 0;
  size_t start = 0;
  while (start < text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_number;
    std::string label = CollapseWhitespace(text.substr(start, end - start));
    start = end + 1;
    if (label.empty()) continue;
    if (!seen.insert(NameKey(label)).second) {
      return absl::InvalidArgumentError(StrCat(
          source, ":", line_number, ": duplicate label \"", label, "\""));
    }
    set.labels_.push_back(std::move(label));
  }
  if (set.labels_.size() != kTpeLabelCount) {
    return absl::InvalidArgumentError(
        StrCat(source, ": expected ", kTpeLabelCount, " labels, found ",
               set.labels_.size()));
  }
  return set;
}

absl::StatusOr<TpeLabelSet> TpeLabelSet::Load(
    const std::filesystem::path& path) {
  auto text = ReadFile(path);
  if (!text.ok()) return text.status();
  return Parse(*text, path.filename().string());
}

const TpeLabelSet& TpeLabelSet::Default() {
  static const TpeLabelSet* set = [] {
    auto* labels = new TpeLabelSet;
    labels->labels_.assign(std::begin(kDefaultLabels), std::end(kDefaultLabels));
    return labels;
  }();
  return *set;
}

std::string BuildTpePremise(const Table& table) {
  std::vector<std::string> segments;
  if (table.caption.has_value() && !IsBlank(*table.caption)) {
    segments.push_back(CollapseWhitespace(*table.caption));
  }
  std::vector<std::string> names;
  std::vector<std::string> cells;
  for (const Column& column : table.columns) {
    names.push_back(CollapseWhitespace(column.name));
    if (!column.cell_samples.empty() && !IsBlank(column.cell_samples[0])) {
      cells.push_back(CollapseWhitespace(column.cell_samples[0]));
    }
  }
  if (!names.empty()) segments.push_back(StrJoin(names, ", "));
  if (!cells.empty()) segments.push_back(StrJoin(cells, ", "));
  return StrJoin(segments, "; ");
}

std::string TpeHypothesis(std::string_view label) {
  return StrCat("This table is about ", label, ".");
}

absl::StatusOr<TpePrediction> ClassifyTpe(const Table& table,
                                          const TpeLabelSet& labels,
                                          const NliScorer& scorer) {
  if (table.columns.empty()) {
    return absl::InvalidArgumentError(
        StrCat("table ", table.table_id, " has no columns"));
  }
  const std::string premise = BuildTpePremise(table);
  std::vector<TextPair> pairs;
  for (const std::string& label : labels.labels()) {
    pairs.emplace_back(premise, TpeHypothesis(label));
  }
  auto scores = scorer.ScoreBatch(pairs);
  if (!scores.ok()) return scores.status();
  if (scores->size() != pairs.size() || pairs.empty()) {
    return absl::InternalError("scorer returned the wrong number of scores");
  }
  size_t best = 0;
  for (size_t i = 1; i < scores->size(); ++i) {
    if ((*scores)[i].entail_logit > (*scores)[best].entail_logit) best = i;
  }
  const double top = (*scores)[best].entail_logit;
  TpePrediction prediction;
  double total = 0;
  for (const NliScores& s : *scores) {
    prediction.distribution.push_back(std::exp(s.entail_logit - top));
    total += prediction.distribution.back();
  }
  for (double& p : prediction.distribution) p /= total;
  prediction.index = best;
  prediction.label = labels.labels()[best];
  return prediction;
}

}  // namespace cta

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

#ifndef CTA_NLI_GATE_NLI_GATE_H_
#define CTA_NLI_GATE_NLI_GATE_H_

#include <atomic>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "cta/table/table_model.h"

namespace cta {

struct NliScores {
  double entail = 0;
  double neutral = 0;
  double contradict = 0;
  // Raw entailment logit, before the softmax.
  double entail_logit = 0;

  bool operator==(const NliScores&) const = default;
};

// OK when every probability is in [0, 1] and they sum to 1 within 1e-6.
absl::Status ValidateNliScores(const NliScores& scores);

using TextPair = std::pair<std::string, std::string>;

// Entailment model. Implementations must be deterministic and thread-safe.
class NliScorer {
 public:
  virtual ~NliScorer() = default;
  virtual absl::StatusOr<NliScores> Score(std::string_view premise,
                                          std::string_view hypothesis) const = 0;
  // Elementwise Score; implementations may batch.
  virtual absl::StatusOr<std::vector<NliScores>> ScoreBatch(
      std::span<const TextPair> pairs) const;
};

// Replays scores recorded per (premise, hypothesis); any other pair gets the
// default scores.
class RecordedScorer : public NliScorer {
 public:
  static constexpr NliScores kDefaultScores = {0.05, 0.9, 0.05,
                                              -2.995732273553991};

  // JSON: {"default"?: scores, "pairs": [{"premise", "hypothesis", "entail",
  // "neutral", "contradict", "entail_logit"?}, ...]}. A missing
  // entail_logit defaults to ln(entail). Invalid probabilities and repeated
  // pairs are InvalidArgument.
  static absl::StatusOr<RecordedScorer> Parse(std::string_view json_text,
                                              std::string_view source);
  static absl::StatusOr<RecordedScorer> Load(const std::filesystem::path& path);

  explicit RecordedScorer(std::map<TextPair, NliScores> recorded,
                          NliScores fallback = kDefaultScores);
  RecordedScorer(const RecordedScorer& other);

  absl::StatusOr<NliScores> Score(std::string_view premise,
                                  std::string_view hypothesis) const override;

  size_t size() const { return recorded_.size(); }
  // Number of Score calls answered with the default.
  size_t default_hits() const { return default_hits_.load(); }

 private:
  struct PairLess {
    using is_transparent = void;
    template <typename A, typename B>
    bool operator()(const A& a, const B& b) const {
      return std::pair<std::string_view, std::string_view>(a.first, a.second) <
             std::pair<std::string_view, std::string_view>(b.first, b.second);
    }
  };

  std::map<TextPair, NliScores, PairLess> recorded_;
  NliScores fallback_;
  mutable std::atomic<size_t> default_hits_{0};
};

inline constexpr double kDefaultRplThreshold = 0.65;
inline constexpr double kDefaultAddThreshold = 0.45;

// "{tpe} {name} ({type})." with whitespace runs collapsed.
std::string BuildContext(std::string_view tpe, const Column& column);

struct Entailment {
  double e1 = 0;  // premise a, hypothesis b
  double e2 = 0;  // premise b, hypothesis a

  bool operator==(const Entailment&) const = default;
};

// Blank contexts are InvalidArgument; scorer errors pass through.
absl::StatusOr<Entailment> BidirectionalEntailment(std::string_view a_ctx,
                                                   std::string_view b_ctx,
                                                   const NliScorer& scorer);

// min(e1, e2) >= threshold.
bool DecideRpl(double e1, double e2,
               double threshold = kDefaultRplThreshold);
bool DecideRpl(const Entailment& entailment,
               double threshold = kDefaultRplThreshold);

struct AddDecision {
  bool accept = false;
  // Entailment against each original context, in input order.
  std::vector<Entailment> pairs;
  // Index of the first original whose max(e1, e2) exceeds the threshold.
  std::optional<size_t> first_conflict;
  // min over originals of 1 - max(e1, e2).
  double margin = 0;
};

// Accepts iff max(e1, e2) <= threshold against every original context. All
// pairs are scored so the decision records where it failed. No originals is
// InvalidArgument.
absl::StatusOr<AddDecision> DecideAdd(std::string_view candidate_ctx,
                                      std::span<const std::string> original_ctxs,
                                      const NliScorer& scorer,
                                      double threshold = kDefaultAddThreshold);

inline constexpr size_t kTpeLabelCount = 48;

class TpeLabelSet {
 public:
  // One label per line; exactly 48 distinct non-blank labels. Blank lines
  // are ignored.
  static absl::StatusOr<TpeLabelSet> Parse(std::string_view text,
                                           std::string_view source);
  static absl::StatusOr<TpeLabelSet> Load(const std::filesystem::path& path);
  // The built-in list of entity categories.
  static const TpeLabelSet& Default();

  const std::vector<std::string>& labels() const { return labels_; }

 private:
  std::vector<std::string> labels_;
};

// Caption, column names joined by ", ", and each column's first cell sample
// joined by ", ", as segments separated by "; ". Empty segments are left out.
std::string BuildTpePremise(const Table& table);

// "This table is about {label}."
std::string TpeHypothesis(std::string_view label);

struct TpePrediction {
  std::string label;
  size_t index = 0;
  // Softmax over the raw entailment logits, in label order.
  std::vector<double> distribution;
};

// Zero-shot TPE: argmax over the labels' entailment logits, ties to the
// lowest label index.
absl::StatusOr<TpePrediction> ClassifyTpe(const Table& table,
                                          const TpeLabelSet& labels,
                                          const NliScorer& scorer);

}  // namespace cta

#endif  // CTA_NLI_GATE_NLI_GATE_H_

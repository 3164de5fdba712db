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

#ifndef CTA_DICT_REPLACER_DICT_REPLACER_H_
#define CTA_DICT_REPLACER_DICT_REPLACER_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "cta/common/rng.h"
#include "cta/table/table_model.h"

namespace cta {

// Casefolded word -> synonyms, surface casing kept.
class SynonymDictionary {
 public:
  // JSON object {"word": ["synonym", ...], ...}. A word listing itself or a
  // repeated synonym (under NameKey) is InvalidArgument; so are two keys
  // that casefold alike.
  static absl::StatusOr<SynonymDictionary> Parse(std::string_view json_text,
                                                 std::string_view source);
  static absl::StatusOr<SynonymDictionary> Load(
      const std::filesystem::path& path);
  static absl::StatusOr<SynonymDictionary> FromMap(
      const std::map<std::string, std::vector<std::string>>& entries);

  // Synonyms of `word` (looked up casefolded), or nullptr.
  const std::vector<std::string>* Find(std::string_view word) const;
  size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, std::vector<std::string>, std::less<>> entries_;
};

struct WordLevelOptions {
  size_t max_candidates = 20;
  double keep_prob = 0.25;
  int repeat_limit = 5;
};

struct SamplerStats {
  // Word positions where a synonym was available, and how many of those kept
  // the original word.
  uint64_t draw_events = 0;
  uint64_t kept = 0;
  uint64_t samples = 0;
  // Samples discarded as equal to the target or an earlier candidate.
  uint64_t repeats = 0;
};

// Samples word-level variants of the target name. Each sample rebuilds the
// name word by word (words split on whitespace, '_' and '-', separators
// kept): a word with synonyms is kept with probability keep_prob and
// otherwise replaced by a uniformly drawn synonym; a word without synonyms is
// always kept. A sample equal (NameKey) to the target or to an earlier
// candidate is a repeat; a fresh one resets the repeat count. Stops at
// max_candidates candidates or repeat_limit consecutive repeats. Candidates
// come back in discovery order. `stats`, when given, is accumulated into.
std::vector<std::string> GenerateWordLevel(const Column& target,
                                           const SynonymDictionary& dictionary,
                                           Rng& rng,
                                           const WordLevelOptions& options = {},
                                           SamplerStats* stats = nullptr);

}  // namespace cta

#endif  // CTA_DICT_REPLACER_DICT_REPLACER_H_

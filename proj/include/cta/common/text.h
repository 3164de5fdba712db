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

#ifndef CTA_COMMON_TEXT_H_
#define CTA_COMMON_TEXT_H_

#include <string>
#include <string_view>
#include <vector>

namespace cta {

// ASCII casefold. Non-ASCII bytes pass through unchanged.
std::string CaseFold(std::string_view text);

// Trims both ends and collapses every run of whitespace to one space.
std::string CollapseWhitespace(std::string_view text);

// Identity key used for column and candidate names: casefolded,
// whitespace-collapsed.
std::string NameKey(std::string_view name);

bool IsBlank(std::string_view text);

// Splits on runs of whitespace.
std::vector<std::string> SplitWhitespace(std::string_view text);

// A name broken into words plus the separator runs between them, so that
// words can be substituted and the name rebuilt with its original layout.
// Separators are whitespace, '_' and '-'.
struct WordSplit {
  std::vector<std::string> words;
  // separators[i] sits between words[i] and words[i + 1].
  std::vector<std::string> separators;
  std::string leading;
  std::string trailing;

  std::string Join(const std::vector<std::string>& replacement_words) const;
};

WordSplit SplitWords(std::string_view name);

}  // namespace cta

#endif  // CTA_COMMON_TEXT_H_

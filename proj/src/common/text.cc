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

#include "cta/common/text.h"

#include <cctype>

namespace cta {
namespace {

bool IsSpace(char c) { return std::isspace(static_cast<unsigned char>(c)); }

bool IsWordSeparator(char c) { return IsSpace(c) || c == '_' || c == '-'; }

}  // namespace

std::string CaseFold(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

std::string CollapseWhitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (IsSpace(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

std::string NameKey(std::string_view name) {
  return CaseFold(CollapseWhitespace(name));
}

bool IsBlank(std::string_view text) {
  for (char c : text) {
    if (!IsSpace(c)) return false;
  }
  return true;
}

std::vector<std::string> SplitWhitespace(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  for (char c : text) {
    if (IsSpace(c)) {
      if (!current.empty()) out.push_back(std::move(current));
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  if (!current.empty()) out.push_back(std::move(current));
  return out;
}

WordSplit SplitWords(std::string_view name) {
  WordSplit split;
  size_t i = 0;
  while (i < name.size() && IsWordSeparator(name[i])) split.leading += name[i++];
  while (i < name.size()) {
    std::string word;
    while (i < name.size() && !IsWordSeparator(name[i])) word += name[i++];
    std::string sep;
    while (i < name.size() && IsWordSeparator(name[i])) sep += name[i++];
    split.words.push_back(std::move(word));
    if (i < name.size()) {
      split.separators.push_back(std::move(sep));
    } else {
      split.trailing = std::move(sep);
    }
  }
  return split;
}

std::string WordSplit::Join(
    const std::vector<std::string>& replacement_words) const {
  std::string out = leading;
  for (size_t i = 0; i < replacement_words.size(); ++i) {
    out += replacement_words[i];
    if (i < separators.size()) out += separators[i];
  }
  out += trailing;
  return out;
}

}  // namespace cta

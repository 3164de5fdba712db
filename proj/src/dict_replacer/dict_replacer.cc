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

#include "cta/dict_replacer/dict_replacer.h"

#include <set>

#include "cta/common/file_io.h"
#include "cta/common/str_cat.h"
#include "cta/common/text.h"
#include "json.hpp"

namespace cta {

absl::StatusOr<SynonymDictionary> SynonymDictionary::FromMap(
    const std::map<std::string, std::vector<std::string>>& entries) {
  SynonymDictionary dictionary;
  for (const auto& [word, synonyms] : entries) {
    const std::string key = NameKey(word);
    if (key.empty()) {
      return absl::InvalidArgumentError("dictionary has a blank headword");
    }
    std::set<std::string> seen;
    std::vector<std::string> kept;
    for (const std::string& synonym : synonyms) {
      const std::string synonym_key = NameKey(synonym);
      if (synonym_key.empty()) {
        return absl::InvalidArgumentError(
            StrCat("dictionary entry \"", word, "\" has a blank synonym"));
      }
      if (synonym_key == key) {
        return absl::InvalidArgumentError(
            StrCat("dictionary entry \"", word, "\" lists itself"));
      }
      if (!seen.insert(synonym_key).second) {
        return absl::InvalidArgumentError(
            StrCat("dictionary entry \"", word, "\" repeats \"", synonym,
                   "\""));
      }
      kept.push_back(CollapseWhitespace(synonym));
    }
    if (kept.empty()) continue;
    if (!dictionary.entries_.emplace(key, std::move(kept)).second) {
      return absl::InvalidArgumentError(
          StrCat("dictionary headword \"", word, "\" appears twice"));
    }
  }
  return dictionary;
}

absl::StatusOr<SynonymDictionary> SynonymDictionary::Parse(
    std::string_view json_text, std::string_view source) {
  nlohmann::json json = nlohmann::json::parse(json_text, nullptr, false);
  if (json.is_discarded() || !json.is_object()) {
    return absl::InvalidArgumentError(
        StrCat(source, ": dictionary must be a JSON object of string arrays"));
  }
  std::map<std::string, std::vector<std::string>> entries;
  for (const auto& [word, synonyms] : json.items()) {
    if (!synonyms.is_array()) {
      return absl::InvalidArgumentError(
          StrCat(source, ": entry \"", word, "\" is not an array"));
    }
    std::vector<std::string>& list = entries[word];
    for (const auto& synonym : synonyms) {
      if (!synonym.is_string()) {
        return absl::InvalidArgumentError(
            StrCat(source, ": entry \"", word, "\" has a non-string synonym"));
      }
      list.push_back(synonym.get<std::string>());
    }
  }
  auto dictionary = FromMap(entries);
  if (!dictionary.ok()) {
    return absl::InvalidArgumentError(
        StrCat(source, ": ", dictionary.status().message()));
  }
  return dictionary;
}

absl::StatusOr<SynonymDictionary> SynonymDictionary::Load(
    const std::filesystem::path& path) {
  auto text = ReadFile(path);
  if (!text.ok()) return text.status();
  return Parse(*text, path.filename().string());
}

const std::vector<std::string>* SynonymDictionary::Find(
    std::string_view word) const {
  auto it = entries_.find(NameKey(word));
  return it == entries_.end() ? nullptr : &it->second;
}

std::vector<std::string> GenerateWordLevel(const Column& target,
                                           const SynonymDictionary& dictionary,
                                           Rng& rng,
                                           const WordLevelOptions& options,
                                           SamplerStats* stats) {
  SamplerStats local;
  SamplerStats& s = stats != nullptr ? *stats : local;
  std::vector<std::string> candidates;
  const WordSplit split = SplitWords(target.name);
  if (split.words.empty()) return candidates;
  std::vector<const std::vector<std::string>*> synonyms;
  for (const std::string& word : split.words) {
    synonyms.push_back(dictionary.Find(word));
  }

  std::set<std::string> seen = {NameKey(target.name)};
  int consecutive_repeats = 0;
  std::vector<std::string> words(split.words.size());
  while (candidates.size() < options.max_candidates &&
         consecutive_repeats < options.repeat_limit) {
    for (size_t i = 0; i < words.size(); ++i) {
      words[i] = split.words[i];
      if (synonyms[i] == nullptr) continue;
      ++s.draw_events;
      if (rng.UniformDouble() < options.keep_prob) {
        ++s.kept;
      } else {
        words[i] = (*synonyms[i])[rng.UniformIndex(synonyms[i]->size())];
      }
    }
    ++s.samples;
    std::string sample = split.Join(words);
    if (seen.insert(NameKey(sample)).second) {
      candidates.push_back(std::move(sample));
      consecutive_repeats = 0;
    } else {
      ++s.repeats;
      ++consecutive_repeats;
    }
  }
  return candidates;
}

}  // namespace cta

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

#ifndef CTA_TABLE_JSON_CODEC_H_
#define CTA_TABLE_JSON_CODEC_H_

#include <string>
#include <string_view>

#include "absl/status/statusor.h"
#include "cta/table/table_model.h"
#include "json.hpp"

namespace cta {

using Json = nlohmann::ordered_json;

Json TableToJson(const Table& table);
Json ExampleToJson(const Example& example);
Json AnnotationToJson(const AdvetaAnnotation& annotation);

// `locus` prefixes error messages, e.g. "corpus.jsonl:12".
absl::StatusOr<Table> TableFromJson(const Json& json, std::string_view locus,
                                    size_t max_cell_samples = 32);
absl::StatusOr<Example> ExampleFromJson(const Json& json,
                                        std::string_view locus);
absl::StatusOr<AdvetaAnnotation> AnnotationFromJson(const Json& json,
                                                    std::string_view locus);

// A parsed JSON value and where it came from.
struct JsonRecord {
  Json value;
  std::string locus;
};

// Parses `text` as one JSON document if possible, else as line-delimited
// JSON. Malformed input yields InvalidArgument naming the line.
absl::StatusOr<std::vector<JsonRecord>> ParseJsonRecords(
    std::string_view text, std::string_view source, bool* single_document);

}  // namespace cta

#endif  // CTA_TABLE_JSON_CODEC_H_

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

#ifndef CTA_CLI_CLI_H_
#define CTA_CLI_CLI_H_

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"

namespace cta {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNotFound = 3;
inline constexpr int kExitScorerUnreachable = 4;
inline constexpr int kExitInvalidData = 5;

int ExitCodeFor(const absl::Status& status);

// Settings shared by every command. Values come from, in increasing
// precedence: defaults, the --config file, CTA_* environment variables
// (paths and endpoint only), command-line flags.
struct CliConfig {
  std::string corpus;
  std::string corpus_format = "spider_like";
  std::string retrieval_corpus;
  std::string retrieval_format = "single_table";
  std::string annotations;
  std::string embeddings;
  std::string dictionary;
  std::string labels;
  std::string index;
  std::string endpoint;
  std::string stub_scores;
  double rpl_threshold = 0.65;
  double add_threshold = 0.45;
  size_t k_retrieve = 100;
  size_t k_rerank = 20;
  double keep_prob = 0.25;
  size_t max_candidates = 20;
  int repeat_limit = 5;
  uint64_t seed = 0;
  int threads = 1;
};

// Config file: one `key = value` per line, `#` starts a comment, values may
// be double-quoted. Keys are the CliConfig field names. Unknown keys and
// unparsable values are InvalidArgument naming the line.
absl::Status ApplyConfigText(std::string_view text, std::string_view source,
                             CliConfig& config);

using EnvLookup = std::function<const char*(const char*)>;

// CTA_CORPUS, CTA_RETRIEVAL_CORPUS, CTA_ANNOTATIONS, CTA_EMBEDDINGS,
// CTA_DICTIONARY, CTA_LABELS, CTA_INDEX, CTA_ENDPOINT, CTA_STUB_SCORES.
void ApplyEnvironment(const EnvLookup& getenv, CliConfig& config);

// Thresholds and keep_prob in [0, 1], k values and threads positive.
absl::Status ValidateConfig(const CliConfig& config);

// Runs one command. `args` excludes the program name. Results go to `out`,
// errors to `err` as a JSON object {"error": {"code", "message"}}.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err, const EnvLookup& getenv = nullptr);

}  // namespace cta

#endif  // CTA_CLI_CLI_H_

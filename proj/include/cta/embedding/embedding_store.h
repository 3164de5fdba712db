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

#ifndef CTA_EMBEDDING_EMBEDDING_STORE_H_
#define CTA_EMBEDDING_EMBEDDING_STORE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace cta {

using Vector = std::vector<double>;

// Numberbatch-style key: "/c/en/" prefix dropped, lowercase, whitespace and
// hyphens become underscores, other punctuation removed, runs of
// underscores collapsed. "Runner-up" -> "runner_up".
std::string NormalizeKey(std::string_view phrase);

// Immutable phrase -> vector table. Components are held as float32.
class EmbeddingStore {
 public:
  // Text format: a "count dims" header, then one "key v1 ... vd" line per
  // entry. Keys are normalized on load; when two keys normalize alike the
  // first wins. A line with the wrong number of components or a non-finite
  // component is an InvalidArgument naming the line.
  static absl::StatusOr<EmbeddingStore> ParseText(std::string_view text,
                                                  std::string_view source);
  static absl::StatusOr<EmbeddingStore> LoadText(
      const std::filesystem::path& path);

  // Binary cache: magic "CTAEMB01", u32 version, u32 dims, u64 count, then
  // per entry u32 key length, key bytes, dims little-endian float32, in key
  // order.
  static absl::StatusOr<EmbeddingStore> LoadBinary(
      const std::filesystem::path& path);
  absl::Status SaveBinary(const std::filesystem::path& path) const;

  // Picks the binary or text reader from the file's first bytes.
  static absl::StatusOr<EmbeddingStore> Load(const std::filesystem::path& path);

  // Entries with keys already normalized or not; dims must be positive.
  static absl::StatusOr<EmbeddingStore> FromEntries(
      int dims, const std::vector<std::pair<std::string, Vector>>& entries);

  int dims() const { return dims_; }
  size_t size() const { return keys_.size(); }
  // Normalized keys in ascending order.
  std::vector<std::string> Keys() const;
  // Number of input lines dropped because their key normalized to an
  // existing one.
  size_t duplicate_keys() const { return duplicate_keys_; }

  // Exact hit on the normalized key.
  std::optional<Vector> Lookup(std::string_view key) const;

  // The vector for the whole phrase if present, otherwise the componentwise
  // mean over the phrase's in-vocabulary words, otherwise nullopt.
  std::optional<Vector> LookupPhrase(std::string_view phrase) const;

 private:
  EmbeddingStore() = default;
  absl::Status Add(std::string key, const float* values, size_t* duplicates);

  int dims_ = 0;
  std::vector<std::string> keys_;
  std::vector<float> data_;
  std::unordered_map<std::string, uint32_t> index_;
  size_t duplicate_keys_ = 0;
};

// dot(a, b) / (|a| |b|), clamped to [-1, 1]. InvalidArgument for unequal
// dims or an all-zero vector.
absl::StatusOr<double> Cosine(const Vector& a, const Vector& b);

double Norm(const Vector& v);

// Cosine with norms supplied by the caller; bit-identical to Cosine when
// the norms come from Norm. Both norms must be nonzero.
double CosineWithNorms(const Vector& a, double norm_a, const Vector& b,
                       double norm_b);

}  // namespace cta

#endif  // CTA_EMBEDDING_EMBEDDING_STORE_H_

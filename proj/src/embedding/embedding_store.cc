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

#include "cta/embedding/embedding_store.h"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <functional>
#include <numeric>

#include "cta/common/file_io.h"
#include "cta/common/str_cat.h"
#include "cta/common/text.h"

namespace cta {
namespace {

constexpr char kMagic[8] = {'C', 'T', 'A', 'E', 'M', 'B', '0', '1'};
constexpr uint32_t kBinaryVersion = 1;

static_assert(std::endian::native == std::endian::little,
              "binary caches assume a little-endian host");

bool IsSpace(char c) { return std::isspace(static_cast<unsigned char>(c)); }

std::string_view NextField(std::string_view& line) {
  size_t start = 0;
  while (start < line.size() && IsSpace(line[start])) ++start;
  size_t end = start;
  while (end < line.size() && !IsSpace(line[end])) ++end;
  std::string_view field = line.substr(start, end - start);
  line.remove_prefix(end);
  return field;
}

std::optional<double> ParseDouble(std::string_view field) {
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double value = 0;
  auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    return std::nullopt;
  }
  return value;
}

// Streams the text format one line at a time.
class TextReader {
 public:
  explicit TextReader(std::string_view source) : source_(source) {}

  absl::Status Line(std::string_view line, int line_number,
                    const std::function<absl::Status(std::string, const float*)>&
                        add) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (IsBlank(line)) return absl::OkStatus();
    if (dims_ == 0) return Header(line, line_number);
    std::string_view rest = line;
    const std::string_view key = NextField(rest);
    values_.clear();
    for (std::string_view field = NextField(rest); !field.empty();
         field = NextField(rest)) {
      auto value = ParseDouble(field);
      if (!value.has_value() || !std::isfinite(*value)) {
        return Error(line_number, StrCat("bad component \"", field, "\""));
      }
      values_.push_back(static_cast<float>(*value));
      if (!std::isfinite(values_.back())) {
        return Error(line_number, StrCat("component \"", field,
                                         "\" overflows float32"));
      }
    }
    if (values_.size() != static_cast<size_t>(dims_)) {
      return Error(line_number, StrCat("expected ", dims_, " components, got ",
                                       values_.size()));
    }
    ++entries_;
    return add(std::string(key), values_.data());
  }

  absl::Status Finish() const {
    if (dims_ == 0) {
      return absl::InvalidArgumentError(
          StrCat(source_, ": missing \"count dims\" header"));
    }
    if (entries_ != declared_count_) {
      return absl::InvalidArgumentError(
          StrCat(source_, ": header declares ", declared_count_,
                 " entries but the file has ", entries_));
    }
    return absl::OkStatus();
  }

  int dims() const { return dims_; }

 private:
  absl::Status Header(std::string_view line, int line_number) {
    std::string_view rest = line;
    const std::string_view count = NextField(rest);
    const std::string_view dims = NextField(rest);
    uint64_t parsed_count = 0;
    int parsed_dims = 0;
    const bool ok =
        std::from_chars(count.data(), count.data() + count.size(),
                        parsed_count)
                .ptr == count.data() + count.size() &&
        !count.empty() &&
        std::from_chars(dims.data(), dims.data() + dims.size(), parsed_dims)
                .ptr == dims.data() + dims.size() &&
        !dims.empty() && NextField(rest).empty() && parsed_dims > 0;
    if (!ok) {
      return Error(line_number, "header must be \"count dims\" with dims > 0");
    }
    declared_count_ = parsed_count;
    dims_ = parsed_dims;
    return absl::OkStatus();
  }

  absl::Status Error(int line_number, std::string_view message) const {
    return absl::InvalidArgumentError(
        StrCat(source_, ":", line_number, ": ", message));
  }

  std::string source_;
  int dims_ = 0;
  uint64_t declared_count_ = 0;
  uint64_t entries_ = 0;
  std::vector<float> values_;
};

template <typename T>
void PutRaw(std::string& out, T value) {
  char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  out.append(bytes, sizeof(T));
}

template <typename T>
bool GetRaw(std::string_view& in, T& value) {
  if (in.size() < sizeof(T)) return false;
  std::memcpy(&value, in.data(), sizeof(T));
  in.remove_prefix(sizeof(T));
  return true;
}

}  // namespace

std::string NormalizeKey(std::string_view phrase) {
  constexpr std::string_view kConceptPrefix = "/c/en/";
  if (phrase.starts_with(kConceptPrefix)) phrase.remove_prefix(kConceptPrefix.size());
  std::string out;
  out.reserve(phrase.size());
  bool pending = false;
  for (char c : phrase) {
    const unsigned char u = static_cast<unsigned char>(c);
    if (std::isspace(u) || c == '_' || c == '-') {
      pending = !out.empty();
    } else if (std::ispunct(u)) {
      continue;
    } else {
      if (pending) out.push_back('_');
      pending = false;
      out.push_back(static_cast<char>(std::tolower(u)));
    }
  }
  return out;
}

absl::Status EmbeddingStore::Add(std::string key, const float* values,
                                 size_t* duplicates) {
  key = NormalizeKey(key);
  if (key.empty()) return absl::OkStatus();
  if (index_.contains(key)) {
    if (duplicates != nullptr) ++*duplicates;
    return absl::OkStatus();
  }
  index_.emplace(key, static_cast<uint32_t>(keys_.size()));
  keys_.push_back(std::move(key));
  data_.insert(data_.end(), values, values + dims_);
  return absl::OkStatus();
}

absl::StatusOr<EmbeddingStore> EmbeddingStore::ParseText(
    std::string_view text, std::string_view source) {
  EmbeddingStore store;
  TextReader reader(source);
  const auto add = [&](std::string key, const float* values) {
    store.dims_ = reader.dims();
    return store.Add(std::move(key), values, &store.duplicate_keys_);
  };
  int line_number = 0;
  size_t start = 0;
  while (start < text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    if (auto s = reader.Line(text.substr(start, end - start), ++line_number, add);
        !s.ok()) {
      return s;
    }
    start = end + 1;
  }
  if (auto s = reader.Finish(); !s.ok()) return s;
  store.dims_ = reader.dims();
  return store;
}

absl::StatusOr<EmbeddingStore> EmbeddingStore::LoadText(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    return absl::NotFoundError(StrCat("cannot open ", path.string()));
  }
  EmbeddingStore store;
  const std::string source = path.filename().string();
  TextReader reader(source);
  const auto add = [&](std::string key, const float* values) {
    store.dims_ = reader.dims();
    return store.Add(std::move(key), values, &store.duplicate_keys_);
  };
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    if (auto s = reader.Line(line, ++line_number, add); !s.ok()) return s;
  }
  if (auto s = reader.Finish(); !s.ok()) return s;
  store.dims_ = reader.dims();
  return store;
}

absl::Status EmbeddingStore::SaveBinary(
    const std::filesystem::path& path) const {
  std::vector<uint32_t> order(keys_.size());
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(),
            [&](uint32_t a, uint32_t b) { return keys_[a] < keys_[b]; });
  std::string out(kMagic, sizeof(kMagic));
  PutRaw<uint32_t>(out, kBinaryVersion);
  PutRaw<uint32_t>(out, static_cast<uint32_t>(dims_));
  PutRaw<uint64_t>(out, keys_.size());
  for (uint32_t i : order) {
    PutRaw<uint32_t>(out, static_cast<uint32_t>(keys_[i].size()));
    out += keys_[i];
    out.append(reinterpret_cast<const char*>(&data_[size_t{i} * dims_]),
               sizeof(float) * dims_);
  }
  return WriteFileAtomic(path, out);
}

absl::StatusOr<EmbeddingStore> EmbeddingStore::LoadBinary(
    const std::filesystem::path& path) {
  auto bytes = ReadFile(path);
  if (!bytes.ok()) return bytes.status();
  std::string_view in = *bytes;
  const std::string source = path.filename().string();
  const auto corrupt = [&](std::string_view what) {
    return absl::InvalidArgumentError(
        StrCat(source, ": corrupt embedding cache (", what, ")"));
  };
  if (!in.starts_with(std::string_view(kMagic, sizeof(kMagic)))) {
    return corrupt("bad magic");
  }
  in.remove_prefix(sizeof(kMagic));
  uint32_t version = 0, dims = 0;
  uint64_t count = 0;
  if (!GetRaw(in, version) || !GetRaw(in, dims) || !GetRaw(in, count)) {
    return corrupt("truncated header");
  }
  if (version != kBinaryVersion) {
    return corrupt(StrCat("unsupported version ", version));
  }
  if (dims == 0) return corrupt("zero dims");
  EmbeddingStore store;
  store.dims_ = static_cast<int>(dims);
  std::vector<float> values(dims);
  for (uint64_t i = 0; i < count; ++i) {
    uint32_t key_size = 0;
    if (!GetRaw(in, key_size) || in.size() < key_size + sizeof(float) * dims) {
      return corrupt(StrCat("truncated entry ", i));
    }
    std::string key(in.substr(0, key_size));
    in.remove_prefix(key_size);
    std::memcpy(values.data(), in.data(), sizeof(float) * dims);
    in.remove_prefix(sizeof(float) * dims);
    if (auto s = store.Add(std::move(key), values.data(), nullptr); !s.ok()) {
      return s;
    }
  }
  if (!in.empty()) return corrupt("trailing bytes");
  return store;
}

absl::StatusOr<EmbeddingStore> EmbeddingStore::Load(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return absl::NotFoundError(StrCat("cannot open ", path.string()));
  char head[sizeof(kMagic)] = {};
  in.read(head, sizeof(head));
  if (in.gcount() == sizeof(head) &&
      std::memcmp(head, kMagic, sizeof(kMagic)) == 0) {
    return LoadBinary(path);
  }
  return LoadText(path);
}

absl::StatusOr<EmbeddingStore> EmbeddingStore::FromEntries(
    int dims, const std::vector<std::pair<std::string, Vector>>& entries) {
  if (dims <= 0) return absl::InvalidArgumentError("dims must be positive");
  EmbeddingStore store;
  store.dims_ = dims;
  std::vector<float> values(dims);
  for (const auto& [key, vector] : entries) {
    if (vector.size() != static_cast<size_t>(dims)) {
      return absl::InvalidArgumentError(
          StrCat("entry \"", key, "\" has ", vector.size(),
                 " components, expected ", dims));
    }
    for (int i = 0; i < dims; ++i) values[i] = static_cast<float>(vector[i]);
    if (auto s = store.Add(key, values.data(), &store.duplicate_keys_);
        !s.ok()) {
      return s;
    }
  }
  return store;
}

std::vector<std::string> EmbeddingStore::Keys() const {
  std::vector<std::string> keys = keys_;
  std::sort(keys.begin(), keys.end());
  return keys;
}

std::optional<Vector> EmbeddingStore::Lookup(std::string_view key) const {
  auto it = index_.find(NormalizeKey(key));
  if (it == index_.end()) return std::nullopt;
  const float* begin = &data_[size_t{it->second} * dims_];
  return Vector(begin, begin + dims_);
}

std::optional<Vector> EmbeddingStore::LookupPhrase(
    std::string_view phrase) const {
  const std::string key = NormalizeKey(phrase);
  if (key.empty()) return std::nullopt;
  if (auto hit = Lookup(key)) return hit;
  Vector sum(dims_, 0.0);
  int found = 0;
  size_t start = 0;
  while (start <= key.size()) {
    size_t end = key.find('_', start);
    if (end == std::string::npos) end = key.size();
    if (auto word = Lookup(key.substr(start, end - start))) {
      for (int i = 0; i < dims_; ++i) sum[i] += (*word)[i];
      ++found;
    }
    start = end + 1;
  }
  if (found == 0) return std::nullopt;
  for (double& x : sum) x /= found;
  return sum;
}

double Norm(const Vector& v) {
  double sq = 0;
  for (double x : v) sq += x * x;
  return std::sqrt(sq);
}

double CosineWithNorms(const Vector& a, double norm_a, const Vector& b,
                       double norm_b) {
  double dot = 0;
  for (size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
  // Order the norm product so cosine(a, b) == cosine(b, a) bit for bit.
  const double denom = norm_a < norm_b ? norm_a * norm_b : norm_b * norm_a;
  return std::clamp(dot / denom, -1.0, 1.0);
}

absl::StatusOr<double> Cosine(const Vector& a, const Vector& b) {
  if (a.size() != b.size()) {
    return absl::InvalidArgumentError(
        StrCat("cosine of vectors with ", a.size(), " and ", b.size(),
               " components"));
  }
  const double na = Norm(a);
  const double nb = Norm(b);
  if (na == 0 || nb == 0) {
    return absl::InvalidArgumentError(
        "cosine similarity is undefined for a zero vector");
  }
  return CosineWithNorms(a, na, b, nb);
}

}  // namespace cta

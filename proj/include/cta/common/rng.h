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

#ifndef CTA_COMMON_RNG_H_
#define CTA_COMMON_RNG_H_

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>

namespace cta {

// Seedable pseudo-random stream. The engine is std::mt19937_64, whose output
// sequence is fixed by the standard; the derived draws below avoid the
// library distributions, which are implementation-defined, so a seed yields
// the same draws on every platform.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }

  // Uniform in [0, 1) with 53 bits of precision.
  double UniformDouble();

  // Uniform in [0, n). n must be positive.
  uint64_t UniformIndex(uint64_t n);

 private:
  std::mt19937_64 engine_;
};

// Stable 64-bit hash (FNV-1a followed by a splitmix64 finalizer).
uint64_t StableHash(std::string_view bytes);

// Derives a per-unit seed from a global seed and a list of labels
// (e.g. table id and column name). Stable across runs and platforms.
uint64_t DeriveSeed(uint64_t global_seed,
                    std::initializer_list<std::string_view> parts);

}  // namespace cta

#endif  // CTA_COMMON_RNG_H_

// Copyright 2026 The vidscript Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace vidscript {

enum class ErrorKind {
  kInvalidArgument,
  kEmptyInput,
  kShapeMismatch,
  kOutOfRange,
  kNotNormalized,
  kNonFinite,
  kDivisibility,
  kOversizeWord,
  kInconsistentAlignment,
  kTooLarge,
  kZeroVector,
  kParse,
  kIo,
};

std::string_view error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Time point or duration with 1 ms resolution. Transcript timing from ASR
// tracks is far coarser than this, so equality is exact.
struct Millis {
  std::int64_t count = 0;

  static Millis from_seconds(double s) {
    return Millis{static_cast<std::int64_t>(std::llround(s * 1000.0))};
  }
  double seconds() const { return static_cast<double>(count) / 1000.0; }

  auto operator<=>(const Millis&) const = default;
};

// 64-bit FNV-1a, used wherever a hash must be stable across platforms.
std::uint64_t fnv1a64(std::string_view bytes,
                      std::uint64_t seed = 0xcbf29ce484222325ULL);

// Derives an independent per-item seed from a global seed and an item id.
std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view item_id);

// Seeded random source. The engine is the standard Mersenne twister; the
// draws are implemented here because std:: distributions differ between
// standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  // Uniform on [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }
  // Uniform on {0, ..., n-1}; n must be positive.
  std::uint64_t index(std::uint64_t n);
  bool bernoulli(double p) { return uniform01() < p; }
  // Number of successes before the first failure, P(k) = (1-p) p^k.
  std::uint64_t geometric(double p);

 private:
  std::mt19937_64 engine_;
};

}  // namespace vidscript

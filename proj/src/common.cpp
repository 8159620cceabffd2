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

#include "vidscript/common.hpp"

#include <limits>

namespace vidscript {

std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return "invalid_argument";
    case ErrorKind::kEmptyInput: return "empty_input";
    case ErrorKind::kShapeMismatch: return "shape_mismatch";
    case ErrorKind::kOutOfRange: return "out_of_range";
    case ErrorKind::kNotNormalized: return "not_normalized";
    case ErrorKind::kNonFinite: return "non_finite";
    case ErrorKind::kDivisibility: return "divisibility";
    case ErrorKind::kOversizeWord: return "oversize_word";
    case ErrorKind::kInconsistentAlignment: return "inconsistent_alignment";
    case ErrorKind::kTooLarge: return "too_large";
    case ErrorKind::kZeroVector: return "zero_vector";
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kIo: return "io";
  }
  return "unknown";
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t h = seed;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view item_id) {
  // splitmix64 finalizer over the mixed pair
  std::uint64_t z = fnv1a64(item_id) ^ (global_seed + 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t Rng::index(std::uint64_t n) {
  if (n == 0) throw Error(ErrorKind::kInvalidArgument, "Rng::index: n == 0");
  // Rejection sampling keeps the draw exactly uniform.
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() -
      std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

std::uint64_t Rng::geometric(double p) {
  if (!(p >= 0.0 && p < 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "Rng::geometric: p outside [0,1)");
  }
  std::uint64_t k = 0;
  while (bernoulli(p)) ++k;
  return k;
}

}  // namespace vidscript

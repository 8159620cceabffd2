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

// Word-level alignment of a noisy ASR transcript with its cleaned rewrite,
// and transfer of the noisy word timing onto the clean words.

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vidscript/corpus.hpp"

namespace vidscript::align {

// Unit-cost edit distance over Unicode code points.
std::size_t levenshtein(std::string_view a, std::string_view b);

struct Alignment {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (noisy, clean)
  double total_cost = 0.0;

  bool operator==(const Alignment&) const = default;
};

// Minimum-cost monotonic alignment covering every word of both lists.
//
// Steps from (i, j): advance both -> (i+1, j+1); advance clean -> (i, j+1);
// advance noisy -> (i+1, j). Each visited pair costs
// levenshtein(noisy[i], clean[j]); a non-diagonal step additionally costs
// the code-point length of the word it steps onto (the word that has no
// counterpart of its own). Among optimal paths the one preferring
// advance-both, then advance-clean, then advance-noisy (read from the end
// of the path backwards) is returned.
//
// Memory is O(|noisy| * |clean|). Throws Error(kEmptyInput) if either list
// is empty.
Alignment dtw_align(std::span<const std::string> noisy,
                    std::span<const std::string> clean);

// Each clean word gets the mean start and mean end of the noisy words
// aligned to it (rounded to the nearest millisecond).
std::vector<corpus::TimedWord> transfer_timing(
    const Alignment& alignment, std::span<const corpus::TimedWord> noisy,
    std::span<const std::string> clean);

// Clamps each word's end to the next word's start so the result satisfies
// the transcript ordering invariant. Averaged timings can overlap by a few
// milliseconds where one noisy word is shared by two clean words.
void clamp_overlaps(std::vector<corpus::TimedWord>& words);

// Checks monotonicity, full coverage and unit steps; throws
// Error(kInconsistentAlignment) describing the first failure.
void check_alignment(const Alignment& alignment, std::size_t noisy_len,
                     std::size_t clean_len);

}  // namespace vidscript::align

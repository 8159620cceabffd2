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

#include "vidscript/align.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <sstream>

#include "vidscript/text.hpp"

namespace vidscript::align {

std::size_t levenshtein(std::string_view a, std::string_view b) {
  const std::u32string s1 = text::to_code_points(a);
  const std::u32string s2 = text::to_code_points(b);
  std::vector<std::size_t> prev(s2.size() + 1), cur(s2.size() + 1);
  for (std::size_t j = 0; j <= s2.size(); ++j) prev[j] = j;
  for (std::size_t i = 0; i < s1.size(); ++i) {
    cur[0] = i + 1;
    for (std::size_t j = 0; j < s2.size(); ++j) {
      cur[j + 1] = std::min({cur[j] + 1, prev[j + 1] + 1,
                             prev[j] + (s1[i] == s2[j] ? 0 : 1)});
    }
    std::swap(cur, prev);
  }
  return prev[s2.size()];
}

Alignment dtw_align(std::span<const std::string> noisy,
                    std::span<const std::string> clean) {
  if (noisy.empty() || clean.empty()) {
    throw Error(ErrorKind::kEmptyInput, "dtw_align: empty word list");
  }
  const std::size_t n = noisy.size(), m = clean.size();
  std::vector<std::int64_t> noisy_len(n), clean_len(m);
  for (std::size_t i = 0; i < n; ++i) {
    noisy_len[i] = static_cast<std::int64_t>(text::to_code_points(noisy[i]).size());
  }
  for (std::size_t j = 0; j < m; ++j) {
    clean_len[j] = static_cast<std::int64_t>(text::to_code_points(clean[j]).size());
  }
  auto at = [m](std::size_t i, std::size_t j) { return i * m + j; };
  constexpr std::int64_t kInf = std::numeric_limits<std::int64_t>::max() / 4;
  std::vector<std::int64_t> pair_cost(n * m), acc(n * m, kInf);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      pair_cost[at(i, j)] =
          static_cast<std::int64_t>(levenshtein(noisy[i], clean[j]));
    }
  }
  acc[0] = pair_cost[0];
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i == 0 && j == 0) continue;
      std::int64_t best = kInf;
      if (i > 0 && j > 0) best = std::min(best, acc[at(i - 1, j - 1)]);
      if (j > 0) best = std::min(best, acc[at(i, j - 1)] + clean_len[j]);
      if (i > 0) best = std::min(best, acc[at(i - 1, j)] + noisy_len[i]);
      acc[at(i, j)] = best + pair_cost[at(i, j)];
    }
  }

  Alignment out;
  out.total_cost = static_cast<double>(acc[at(n - 1, m - 1)]);
  std::size_t i = n - 1, j = m - 1;
  out.pairs.emplace_back(i, j);
  while (i > 0 || j > 0) {
    const std::int64_t here = acc[at(i, j)] - pair_cost[at(i, j)];
    if (i > 0 && j > 0 && acc[at(i - 1, j - 1)] == here) {
      --i;
      --j;
    } else if (j > 0 && acc[at(i, j - 1)] + clean_len[j] == here) {
      --j;
    } else {
      --i;
    }
    out.pairs.emplace_back(i, j);
  }
  std::reverse(out.pairs.begin(), out.pairs.end());
  return out;
}

void check_alignment(const Alignment& alignment, std::size_t noisy_len,
                     std::size_t clean_len) {
  auto fail = [](const std::string& msg) {
    throw Error(ErrorKind::kInconsistentAlignment, msg);
  };
  const auto& p = alignment.pairs;
  if (p.empty()) fail("alignment has no pairs");
  if (p.front() != std::make_pair<std::size_t, std::size_t>(0, 0)) {
    fail("alignment does not start at (0, 0)");
  }
  if (p.back().first + 1 != noisy_len || p.back().second + 1 != clean_len) {
    fail("alignment does not end at the last word pair");
  }
  for (std::size_t k = 1; k < p.size(); ++k) {
    const std::size_t di = p[k].first - p[k - 1].first;
    const std::size_t dj = p[k].second - p[k - 1].second;
    if (p[k].first < p[k - 1].first || p[k].second < p[k - 1].second ||
        di > 1 || dj > 1 || di + dj == 0) {
      std::ostringstream os;
      os << "invalid step at pair " << k;
      fail(os.str());
    }
  }
}

namespace {

// Round-half-up mean of non-negative millisecond counts.
std::int64_t mean_ms(std::int64_t sum, std::int64_t count) {
  return (2 * sum + count) / (2 * count);
}

}  // namespace

std::vector<corpus::TimedWord> transfer_timing(
    const Alignment& alignment, std::span<const corpus::TimedWord> noisy,
    std::span<const std::string> clean) {
  check_alignment(alignment, noisy.size(), clean.size());
  std::vector<std::int64_t> start_sum(clean.size(), 0), end_sum(clean.size(), 0),
      count(clean.size(), 0);
  for (const auto& [i, j] : alignment.pairs) {
    start_sum[j] += noisy[i].start.count;
    end_sum[j] += noisy[i].end.count;
    ++count[j];
  }
  std::vector<corpus::TimedWord> out;
  out.reserve(clean.size());
  for (std::size_t j = 0; j < clean.size(); ++j) {
    if (count[j] == 0) {
      throw Error(ErrorKind::kInconsistentAlignment,
                  "clean word " + std::to_string(j) + " has no noisy partner");
    }
    out.push_back(corpus::TimedWord{clean[j],
                                    Millis{mean_ms(start_sum[j], count[j])},
                                    Millis{mean_ms(end_sum[j], count[j])}});
  }
  return out;
}

void clamp_overlaps(std::vector<corpus::TimedWord>& words) {
  for (std::size_t k = 0; k + 1 < words.size(); ++k) {
    if (words[k].end > words[k + 1].start) {
      words[k].end = std::max(words[k].start, words[k + 1].start);
    }
  }
}

}  // namespace vidscript::align

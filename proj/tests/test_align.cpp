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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracles.hpp"
#include "vidscript/align.hpp"

using namespace vidscript;
using namespace vidscript::align;
using Pairs = std::vector<std::pair<std::size_t, std::size_t>>;

namespace {

const char* kLexicon[] = {"a", "at", "cat", "cut", "the", "then", "hat", "um",
                          "sat", "set", "café", "cafe", "x", ""};

std::vector<std::string> random_words(Rng& rng, std::size_t max_len) {
  std::vector<std::string> w(1 + rng.index(max_len));
  for (auto& s : w) s = kLexicon[rng.index(std::size(kLexicon))];
  return w;
}

std::string random_string(Rng& rng, std::size_t max_len) {
  std::string s(rng.index(max_len + 1), 'a');
  for (char& c : s) c = static_cast<char>('a' + rng.index(3));
  return s;
}

// Preferred optimal path: reading steps from the end, diagonal before
// clean-only before noisy-only.
Pairs preferred_optimum(const std::vector<std::string>& a,
                        const std::vector<std::string>& b) {
  const auto paths = oracle::all_alignments(a, b);
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (const auto& p : paths) best = std::min(best, p.cost);
  std::vector<int> best_key;
  Pairs best_pairs;
  for (const auto& p : paths) {
    if (p.cost != best) continue;
    std::vector<int> key;
    for (std::size_t k = p.pairs.size() - 1; k > 0; --k) {
      const bool di = p.pairs[k].first != p.pairs[k - 1].first;
      const bool dj = p.pairs[k].second != p.pairs[k - 1].second;
      key.push_back(di && dj ? 0 : dj ? 1 : 2);
    }
    if (best_pairs.empty() || key < best_key) {
      best_key = key;
      best_pairs = p.pairs;
    }
  }
  return best_pairs;
}

}  // namespace

TEST_CASE("levenshtein examples") {
  CHECK(levenshtein("", "abc") == 3);
  CHECK(levenshtein("kitten", "kitten") == 0);
  CHECK(levenshtein("kitten", "sitting") == 3);
  CHECK(levenshtein("café", "cafe") == 1);  // code points, not bytes
  CHECK(levenshtein("", "") == 0);
}

TEST_CASE("levenshtein matches recursive oracle") {
  Rng rng(11);
  for (int t = 0; t < 400; ++t) {
    const std::string a = random_string(rng, 6), b = random_string(rng, 6);
    INFO(a << " / " << b);
    CHECK(levenshtein(a, b) == oracle::edit_distance(a, b));
    CHECK(levenshtein(a, b) == levenshtein(b, a));
  }
}

TEST_CASE("dtw examples") {
  const std::vector<std::string> abc{"a", "b", "c"};
  auto id = dtw_align(abc, abc);
  CHECK(id.pairs == Pairs{{0, 0}, {1, 1}, {2, 2}});
  CHECK(id.total_cost == 0);

  const std::vector<std::string> axc{"a", "x", "c"};
  auto sub = dtw_align(abc, axc);
  CHECK(sub.pairs == Pairs{{0, 0}, {1, 1}, {2, 2}});
  CHECK(sub.total_cost == 1);

  const std::vector<std::string> hi{"hi"}, hi_there{"hi", "there"};
  auto gap = dtw_align(hi, hi_there);
  CHECK(gap.pairs == Pairs{{0, 0}, {0, 1}});
  CHECK(gap.total_cost == static_cast<double>(oracle::min_alignment_cost(hi, hi_there)));
}

TEST_CASE("dtw rejects empty input") {
  const std::vector<std::string> empty, one{"a"};
  CHECK_THROWS_AS(dtw_align(empty, one), Error);
  try {
    dtw_align(one, empty);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kEmptyInput);
  }
}

TEST_CASE("dtw equals exhaustive search, including the tie-break") {
  Rng rng(2026);
  for (int t = 0; t < 300; ++t) {
    const auto a = random_words(rng, 6), b = random_words(rng, 6);
    const auto al = dtw_align(a, b);
    CHECK_NOTHROW(check_alignment(al, a.size(), b.size()));
    CHECK(al.total_cost == static_cast<double>(oracle::min_alignment_cost(a, b)));
    CHECK(al.pairs == preferred_optimum(a, b));
  }
}

TEST_CASE("dtw properties") {
  Rng rng(3);
  for (int t = 0; t < 200; ++t) {
    const auto a = random_words(rng, 8), b = random_words(rng, 8);
    CHECK(dtw_align(a, a).total_cost == 0);
    CHECK(dtw_align(a, b).total_cost == dtw_align(b, a).total_cost);
  }
}

TEST_CASE("check_alignment rejects broken alignments") {
  CHECK_THROWS_AS(check_alignment(Alignment{{{0, 0}, {2, 1}}, 0}, 3, 2), Error);
  CHECK_THROWS_AS(check_alignment(Alignment{{{0, 0}, {0, 0}}, 0}, 1, 1), Error);
  CHECK_THROWS_AS(check_alignment(Alignment{{{0, 0}}, 0}, 2, 1), Error);
  CHECK_THROWS_AS(check_alignment(Alignment{{}, 0}, 1, 1), Error);
  CHECK_NOTHROW(check_alignment(Alignment{{{0, 0}, {1, 0}, {1, 1}}, 0}, 2, 2));
}

TEST_CASE("transfer timing") {
  using corpus::TimedWord;
  std::vector<TimedWord> noisy{{"x", Millis{1000}, Millis{1500}},
                               {"y", Millis{2000}, Millis{2500}}};
  SUBCASE("identity copies timing") {
    const std::vector<std::string> clean{"X", "Y"};
    const auto out = transfer_timing(Alignment{{{0, 0}, {1, 1}}, 0}, noisy, clean);
    REQUIRE(out.size() == 2);
    CHECK(out[0] == TimedWord{"X", Millis{1000}, Millis{1500}});
    CHECK(out[1] == TimedWord{"Y", Millis{2000}, Millis{2500}});
  }
  SUBCASE("one clean word over two noisy words takes the mean") {
    const std::vector<std::string> clean{"xy"};
    const auto out = transfer_timing(Alignment{{{0, 0}, {1, 0}}, 0}, noisy, clean);
    REQUIRE(out.size() == 1);
    CHECK(out[0].start == Millis{1500});
    CHECK(out[0].end == Millis{2000});
  }
  SUBCASE("a gap in coverage is inconsistent") {
    const std::vector<std::string> clean{"a", "b", "c"};
    try {
      transfer_timing(Alignment{{{0, 0}, {1, 2}}, 0}, noisy, clean);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kInconsistentAlignment);
    }
  }
}

TEST_CASE("transfer timing matches per-index averaging and stays monotone") {
  Rng rng(6);
  for (int t = 0; t < 200; ++t) {
    std::vector<std::string> a = random_words(rng, 6), b = random_words(rng, 6);
    std::vector<corpus::TimedWord> noisy;
    std::int64_t clock = 0;
    for (const auto& w : a) {
      const std::int64_t s = clock + static_cast<std::int64_t>(rng.index(300));
      const std::int64_t e = s + static_cast<std::int64_t>(rng.index(500));
      noisy.push_back({w, Millis{s}, Millis{e}});
      clock = e;
    }
    const auto al = dtw_align(a, b);
    const auto out = transfer_timing(al, noisy, b);
    REQUIRE(out.size() == b.size());
    for (std::size_t j = 0; j < b.size(); ++j) {
      double s = 0, e = 0, n = 0;
      for (const auto& [pi, pj] : al.pairs) {
        if (pj != j) continue;
        s += static_cast<double>(noisy[pi].start.count);
        e += static_cast<double>(noisy[pi].end.count);
        ++n;
      }
      CHECK(std::abs(static_cast<double>(out[j].start.count) - s / n) <= 0.5);
      CHECK(std::abs(static_cast<double>(out[j].end.count) - e / n) <= 0.5);
      CHECK(out[j].text == b[j]);
      if (j > 0) CHECK(out[j - 1].start <= out[j].start);
    }
    auto clamped = out;
    clamp_overlaps(clamped);
    CHECK(corpus::validate_transcript(clamped).size() ==
          static_cast<std::size_t>(std::count_if(b.begin(), b.end(),
                                                 [](const std::string& s) { return s.empty(); })));
  }
}

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

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

#include "vidscript/masking.hpp"

using namespace vidscript;
using namespace vidscript::masking;

namespace {

// Sort-based restatement: highest weight first, lower index on ties.
std::vector<std::size_t> attended_oracle(const AttentionProfile& p, double frac) {
  std::vector<std::pair<double, std::size_t>> v;
  for (std::size_t i = 0; i < p.weights.size(); ++i) {
    if (std::find(p.special_positions.begin(), p.special_positions.end(), i) ==
        p.special_positions.end()) {
      v.push_back({-p.weights[i], i});
    }
  }
  std::sort(v.begin(), v.end());
  const auto k = static_cast<std::size_t>(std::ceil(frac * v.size()));
  std::vector<std::size_t> out;
  for (std::size_t t = 0; t < k && t < v.size(); ++t) out.push_back(v[t].second);
  std::sort(out.begin(), out.end());
  return out;
}

const VocabInfo kVocab{100, 99, {97, 98, 99}};

}  // namespace

TEST_CASE("attended set examples") {
  AttentionProfile p{{0, 0, 0, 0, 9}, {}};
  CHECK(attended_set(p) == std::vector<std::size_t>{4});
  p = {std::vector<double>(10, 1.0), {}};
  CHECK(attended_set(p) == std::vector<std::size_t>{0, 1});
  p = {{0, 9, 5, 1, 2}, {1}};
  CHECK(attended_set(p) == std::vector<std::size_t>{2});
}

TEST_CASE("attended set equals sort oracle") {
  Rng rng(21);
  for (int t = 0; t < 500; ++t) {
    AttentionProfile p;
    p.weights.resize(1 + rng.index(40));
    for (double& w : p.weights) w = static_cast<double>(rng.index(5));
    for (std::size_t k = 0; k < p.weights.size(); ++k) {
      if (rng.bernoulli(0.1)) p.special_positions.push_back(k);
    }
    const double frac = rng.uniform01();
    CHECK(attended_set(p, frac) == attended_oracle(p, frac));
  }
}

TEST_CASE("profile validation") {
  AttentionProfile p{{1, -1}, {}};
  CHECK_THROWS_AS(p.validate(), Error);
  p = {{1, std::nan("")}, {}};
  CHECK_THROWS_AS(p.validate(), Error);
  p = {{1, 2}, {5}};
  CHECK_THROWS_AS(p.validate(), Error);
  Rng rng(1);
  CHECK_THROWS_AS(select_targets(3, AttentionProfile{{1, 1}, {}}, rng), Error);
  MaskConfig bad;
  bad.mask_token_prob = 0.95;
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("select_targets examples") {
  Rng rng(7);
  MaskConfig all;
  all.rate = 1.0;
  auto plan = select_targets(1, AttentionProfile{{1.0}, {}}, rng, all);
  CHECK(plan.targets == std::vector<std::size_t>{0});

  MaskConfig none;
  none.rate = 0;
  plan = select_targets(50, AttentionProfile{std::vector<double>(50, 1.0), {}}, rng, none);
  CHECK(plan.targets.empty());

  plan = select_targets(3, AttentionProfile{{1, 1, 1}, {0, 1, 2}}, rng);
  CHECK(plan.targets.empty());
}

TEST_CASE("seed count, specials and determinism over random trials") {
  Rng meta(31);
  for (int t = 0; t < 300; ++t) {
    AttentionProfile p;
    const std::size_t n = 1 + meta.index(120);
    p.weights.resize(n);
    for (double& w : p.weights) w = meta.uniform01();
    for (std::size_t k = 0; k < n; ++k) {
      if (meta.bernoulli(0.15)) p.special_positions.push_back(k);
    }
    MaskConfig cfg;
    cfg.rate = meta.uniform01();
    const std::uint64_t seed = meta.next_u64();
    Rng a(seed), b(seed);
    const auto plan = select_targets(n, p, a, cfg);
    CHECK(plan == select_targets(n, p, b, cfg));
    const std::size_t maskable = p.maskable_positions().size();
    CHECK(plan.seeds.size() ==
          static_cast<std::size_t>(std::llround(cfg.rate * static_cast<double>(maskable))));
    CHECK(std::is_sorted(plan.targets.begin(), plan.targets.end()));
    CHECK(std::adjacent_find(plan.targets.begin(), plan.targets.end()) == plan.targets.end());
    for (std::size_t target : plan.targets) {
      CHECK(std::find(p.special_positions.begin(), p.special_positions.end(), target) ==
            p.special_positions.end());
    }
    // Seeds are distinct and each carries its own action.
    std::vector<std::size_t> seed_pos;
    for (const auto& s : plan.seeds) {
      seed_pos.push_back(s.position);
      const auto it = std::find(plan.targets.begin(), plan.targets.end(), s.position);
      REQUIRE(it != plan.targets.end());
      CHECK(plan.actions[it - plan.targets.begin()] == s.action);
    }
    std::sort(seed_pos.begin(), seed_pos.end());
    CHECK(std::adjacent_find(seed_pos.begin(), seed_pos.end()) == seed_pos.end());
  }
}

TEST_CASE("mask statistics at scale") {
  const std::size_t n = 100000;
  AttentionProfile p{std::vector<double>(n, 1.0), {}};
  Rng rng(7);
  const auto plan = select_targets(n, p, rng);
  CHECK(plan.seeds.size() == 20000);
  double attended = 0, ext = 0;
  for (const auto& s : plan.seeds) {
    attended += s.from_attended;
    ext += static_cast<double>(s.left_extension + s.right_extension);
  }
  CHECK(std::abs(attended / plan.seeds.size() - 0.5) <= 0.01);
  CHECK(std::abs(ext / (2.0 * plan.seeds.size()) - 0.5) <= 0.02);
  std::array<double, 3> counts{};
  for (auto a : plan.actions) counts[static_cast<int>(a)] += 1;
  CHECK(std::abs(counts[0] / plan.actions.size() - 0.8) <= 0.01);
  CHECK(std::abs(counts[1] / plan.actions.size() - 0.1) <= 0.01);
  CHECK(std::abs(counts[2] / plan.actions.size() - 0.1) <= 0.01);
}

TEST_CASE("apply_plan examples") {
  const std::vector<TokenId> toks{5, 6, 7, 8, 9};
  Rng rng(1);
  auto out = apply_plan(toks, MaskPlan{}, rng, kVocab);
  CHECK(out.tokens == toks);
  CHECK(out.labels == std::vector<TokenId>(5, kIgnoreLabel));

  out = apply_plan(toks, MaskPlan{{3}, {MaskAction::kMaskToken}, {}}, rng, kVocab);
  CHECK(out.tokens == std::vector<TokenId>{5, 6, 7, 99, 9});
  CHECK(out.labels == std::vector<TokenId>{-100, -100, -100, 8, -100});

  out = apply_plan(toks, MaskPlan{{2}, {MaskAction::kKeep}, {}}, rng, kVocab);
  CHECK(out.tokens == toks);
  CHECK(out.labels[2] == 7);

  try {
    apply_plan(toks, MaskPlan{{5}, {MaskAction::kKeep}, {}}, rng, kVocab);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kOutOfRange);
  }
}

TEST_CASE("random replacements avoid specials and leave other positions alone") {
  Rng rng(2);
  std::vector<TokenId> toks(200);
  std::iota(toks.begin(), toks.end(), 0);
  for (auto& t : toks) t %= 90;
  MaskPlan plan;
  for (std::size_t k = 0; k < 200; k += 2) {
    plan.targets.push_back(k);
    plan.actions.push_back(MaskAction::kRandomToken);
  }
  const auto out = apply_plan(toks, plan, rng, kVocab);
  for (std::size_t k = 0; k < 200; ++k) {
    if (k % 2) {
      CHECK(out.tokens[k] == toks[k]);
      CHECK(out.labels[k] == kIgnoreLabel);
    } else {
      CHECK(out.tokens[k] < 97);
      CHECK(out.tokens[k] >= 0);
      CHECK(out.labels[k] == toks[k]);
    }
  }
}

TEST_CASE("vocab info from tokenizer") {
  const auto v = VocabInfo::from(Tokenizer::byte_level());
  CHECK(v.vocab_size == 259);
  CHECK(v.mask_id == 257);
  CHECK(v.special_ids.size() == 3);
  CHECK(action_name(MaskAction::kRandomToken) == "random");
}

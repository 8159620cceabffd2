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
#include <cmath>
#include <numeric>

#include "oracles.hpp"
#include "vidscript/reorder.hpp"

using namespace vidscript;
using namespace vidscript::reorder;

namespace {

RelationClass true_class(std::size_t caption, std::size_t frame, const Permutation& s) {
  const std::size_t pos = s.mapping[frame];
  return caption == pos ? kSame : (caption < pos ? kBefore : kAfter);
}

// Puts mass p on the true relation and spreads the rest evenly.
RelationTable confident_table(const Permutation& truth, double p) {
  const std::size_t n = truth.size();
  std::vector<double> lp(n * n * kRelationClasses, std::log((1 - p) / 3));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      lp[(i * n + j) * kRelationClasses + true_class(i, j, truth)] = std::log(p);
    }
  }
  return RelationTable(n, std::move(lp));
}

RelationTable uniform_table(std::size_t n) {
  return RelationTable(n, std::vector<double>(n * n * kRelationClasses, std::log(0.25)));
}

RelationTable random_table(std::size_t n, Rng& rng) {
  std::vector<double> lp(n * n * kRelationClasses);
  for (std::size_t k = 0; k < n * n; ++k) {
    double z = 0;
    for (std::size_t c = 0; c < kRelationClasses; ++c) {
      lp[k * 4 + c] = 3 * rng.uniform01();
      z += std::exp(lp[k * 4 + c]);
    }
    for (std::size_t c = 0; c < kRelationClasses; ++c) lp[k * 4 + c] -= std::log(z);
  }
  return RelationTable(n, std::move(lp));
}

Permutation random_perm(std::size_t n, Rng& rng) {
  Permutation p = Permutation::identity(n);
  for (std::size_t k = n; k > 1; --k) std::swap(p.mapping[k - 1], p.mapping[rng.index(k)]);
  return p;
}

}  // namespace

TEST_CASE("permutation basics") {
  CHECK(Permutation::identity(3).mapping == std::vector<std::size_t>{0, 1, 2});
  CHECK((Permutation{{2, 0, 1}}.is_valid()));
  CHECK_FALSE((Permutation{{0, 0, 1}}.is_valid()));
  CHECK_FALSE((Permutation{{0, 3}}.is_valid()));
  CHECK_THROWS_AS((Permutation{{1, 1}}.validate()), Error);
}

TEST_CASE("uniform table: every ordering scores the same, identity wins ties") {
  const RelationTable t = uniform_table(3);
  Permutation p = Permutation::identity(3);
  do {
    CHECK(score_permutation(t, p) == doctest::Approx(9 * std::log(0.25)));
  } while (std::next_permutation(p.mapping.begin(), p.mapping.end()));
  const auto best = best_ordering(t);
  CHECK(best.permutation == Permutation::identity(3));
  CHECK(best.score == doctest::Approx(9 * std::log(0.25)));
}

TEST_CASE("confident tables recover the truth") {
  Rng rng(12);
  for (std::size_t n : {2u, 3u, 4u, 5u}) {
    for (int t = 0; t < 20; ++t) {
      const Permutation truth = random_perm(n, rng);
      const auto best = best_ordering(confident_table(truth, 0.97));
      CHECK(best.permutation == truth);
    }
  }
}

TEST_CASE("best ordering matches a direct argmax") {
  Rng rng(13);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + rng.index(5);
    const RelationTable table = random_table(n, rng);
    Permutation p = Permutation::identity(n), arg = p;
    double best = -INFINITY;
    do {
      const double s = score_permutation(table, p);
      if (s > best) {
        best = s;
        arg = p;
      }
    } while (std::next_permutation(p.mapping.begin(), p.mapping.end()));
    const auto got = best_ordering(table);
    CHECK(got.permutation == arg);
    CHECK(got.score == doctest::Approx(best));
  }
}

TEST_CASE("ordering edge cases") {
  const auto one = best_ordering(uniform_table(1));
  CHECK(one.permutation == Permutation::identity(1));
  try {
    best_ordering(uniform_table(9));
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kTooLarge);
  }
  CHECK_THROWS_AS(best_ordering(RelationTable()), Error);
  std::vector<double> bad(4, std::log(0.3));
  try {
    RelationTable(1, bad);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kNotNormalized);
  }
  CHECK_THROWS_AS(RelationTable(2, std::vector<double>(4, std::log(0.25))), Error);
  CHECK_THROWS_AS(score_permutation(uniform_table(2), Permutation::identity(3)), Error);
}

TEST_CASE("frame order tables") {
  Rng rng(14);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 2 + rng.index(4);
    const Permutation truth = random_perm(n, rng);
    std::vector<double> lp(n * n * 2, std::log(0.5));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        const bool before = truth.mapping[i] < truth.mapping[j];
        lp[(i * n + j) * 2] = std::log(before ? 0.9 : 0.1);
        lp[(i * n + j) * 2 + 1] = std::log(before ? 0.1 : 0.9);
      }
    }
    const FrameOrderTable table(n, lp);
    CHECK(best_ordering(table).permutation == truth);
    const double pairs = static_cast<double>(n * (n - 1));
    CHECK(score_permutation(table, truth) == doctest::Approx(pairs * std::log(0.9)));
  }
}

TEST_CASE("marginalize_order keeps the argmax of confident tables") {
  Rng rng(15);
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 2 + rng.index(4);
    const Permutation truth = random_perm(n, rng);
    const MarginalOrderTable m = marginalize_order(confident_table(truth, 0.97));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        CHECK(std::exp(m.log_prob_before(i, j)) + std::exp(m.log_prob_after(i, j)) ==
              doctest::Approx(1.0));
      }
    }
    CHECK(best_ordering(m).permutation == truth);
    // Order-only scoring of the original table, written out directly.
    const RelationTable full = confident_table(truth, 0.97);
    Permutation p = Permutation::identity(n);
    do {
      double s = 0;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          const std::size_t pos = p.mapping[j];
          if (i == pos) continue;
          const double b = std::exp(full.log_prob(i, j, kBefore));
          const double a = std::exp(full.log_prob(i, j, kAfter));
          s += std::log((i < pos ? b : a) / (a + b));
        }
      }
      CHECK(score_permutation(m, p) == doctest::Approx(s));
    } while (std::next_permutation(p.mapping.begin(), p.mapping.end()));
  }
}

TEST_CASE("hungarian examples") {
  const Matrix eye{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  const auto a = hungarian_match(eye);
  CHECK(a.total == 3);
  CHECK(a.pairs == std::vector<std::pair<std::size_t, std::size_t>>{{0, 0}, {1, 1}, {2, 2}});
  const Matrix anti{{0, 5}, {5, 0}};
  CHECK(matching_order(anti).mapping == std::vector<std::size_t>{1, 0});
  // All-equal: lexicographically smallest assignment is the identity.
  const Matrix flat(3, 3, 1.0);
  CHECK(matching_order(flat) == Permutation::identity(3));
  CHECK(hungarian_match(Matrix()).pairs.empty());
  Matrix bad = eye;
  bad(1, 2) = std::nan("");
  try {
    hungarian_match(bad);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kNonFinite);
  }
  CHECK_THROWS_AS(matching_order(Matrix(2, 3, 0.0)), Error);
}

TEST_CASE("hungarian matches brute force, including ties and rectangles") {
  Rng rng(16);
  for (int t = 0; t < 400; ++t) {
    const std::size_t r = 1 + rng.index(6), c = 1 + rng.index(6);
    Matrix w(r, c);
    const bool ties = t % 2 == 0;
    for (double& v : w.data()) {
      v = 4 * rng.uniform01() - 2;
      if (ties) v = std::round(v);
    }
    const auto got = hungarian_match(w);
    const auto want = oracle::brute_force_assignment(w);
    INFO("trial " << t << " " << r << "x" << c);
    CHECK(got.total == doctest::Approx(want.total).epsilon(1e-12));
    std::vector<std::pair<std::size_t, std::size_t>> expect;
    for (std::size_t i = 0; i < r; ++i) {
      if (want.col_of[i] < c) expect.emplace_back(i, want.col_of[i]);
    }
    CHECK(got.pairs == expect);
  }
}

TEST_CASE("story metrics") {
  const Permutation id = Permutation::identity(5);
  const Permutation rev{{4, 3, 2, 1, 0}};
  auto m = story_metrics(rev, id);
  CHECK(m.spearman == doctest::Approx(-1));
  CHECK(m.pairwise_accuracy == 0);
  CHECK(m.distance == doctest::Approx(2.4));
  CHECK(story_metrics(rev, id, {true}).distance == doctest::Approx(12));

  const Permutation swap{{1, 0, 2, 3, 4}};
  m = story_metrics(swap, id);
  CHECK(m.pairwise_accuracy == doctest::Approx(0.9));
  CHECK(m.distance == doctest::Approx(0.4));
  CHECK(m.spearman == doctest::Approx(1 - 12.0 / 120));

  const auto one = story_metrics(Permutation::identity(1), Permutation::identity(1));
  CHECK(one.spearman == 1);
  CHECK(one.pairwise_accuracy == 1);
  CHECK(one.distance == 0);
  CHECK_THROWS_AS(story_metrics(id, Permutation::identity(4)), Error);

  Rng rng(17);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + rng.index(7);
    const Permutation a = random_perm(n, rng), b = random_perm(n, rng);
    const auto ab = story_metrics(a, b), ba = story_metrics(b, a), aa = story_metrics(a, a);
    CHECK(ab.spearman == doctest::Approx(ba.spearman));
    CHECK(ab.pairwise_accuracy == doctest::Approx(ba.pairwise_accuracy));
    CHECK(ab.distance == doctest::Approx(ba.distance));
    CHECK(aa.spearman == 1);
    CHECK(aa.pairwise_accuracy == 1);
    CHECK(aa.distance == 0);
    CHECK(ab.spearman >= -1 - 1e-12);
    CHECK(ab.spearman <= 1 + 1e-12);
    // Rank correlation computed the long way.
    double ma = 0, mb = 0, cov = 0, va = 0, vb = 0;
    for (std::size_t e = 0; e < n; ++e) {
      ma += a.mapping[e];
      mb += b.mapping[e];
    }
    ma /= n;
    mb /= n;
    for (std::size_t e = 0; e < n; ++e) {
      cov += (a.mapping[e] - ma) * (b.mapping[e] - mb);
      va += (a.mapping[e] - ma) * (a.mapping[e] - ma);
      vb += (b.mapping[e] - mb) * (b.mapping[e] - mb);
    }
    CHECK(ab.spearman == doctest::Approx(cov / std::sqrt(va * vb)));
  }
}

TEST_CASE("story set evaluation") {
  std::vector<RelationTable> tables;
  std::vector<Permutation> truths;
  CHECK_THROWS_AS(evaluate_story_set(tables, truths), Error);
  Rng rng(18);
  for (int s = 0; s < 50; ++s) {
    truths.push_back(random_perm(5, rng));
    tables.push_back(confident_table(truths.back(), 0.97));
  }
  const auto r = evaluate_story_set(tables, truths);
  CHECK(r.n_stories == 50);
  CHECK(r.spearman == 1);
  CHECK(r.pairwise_accuracy == 1);
  CHECK(r.distance == 0);

  for (auto& t : tables) t = random_table(4, rng);
  for (auto& p : truths) p = random_perm(4, rng);
  const auto r1 = evaluate_story_set(tables, truths, {}, 1);
  for (std::size_t jobs : {2u, 4u, 7u}) {
    const auto rj = evaluate_story_set(tables, truths, {}, jobs);
    CHECK(rj.spearman == r1.spearman);
    CHECK(rj.pairwise_accuracy == r1.pairwise_accuracy);
    CHECK(rj.distance == r1.distance);
  }
  std::vector<Permutation> preds;
  for (const auto& t : tables) preds.push_back(best_ordering(t).permutation);
  const auto rp = evaluate_predictions(preds, truths);
  CHECK(rp.spearman == doctest::Approx(r1.spearman));

  truths.pop_back();
  CHECK_THROWS_AS(evaluate_story_set(tables, truths), Error);
  truths.push_back(Permutation::identity(3));
  try {
    evaluate_story_set(tables, truths);
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("story 49") != std::string::npos);
  }
}

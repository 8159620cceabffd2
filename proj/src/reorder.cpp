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

#include "vidscript/reorder.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

namespace vidscript::reorder {

Permutation Permutation::identity(std::size_t n) {
  Permutation p;
  p.mapping.resize(n);
  std::iota(p.mapping.begin(), p.mapping.end(), std::size_t{0});
  return p;
}

bool Permutation::is_valid() const {
  std::vector<bool> seen(mapping.size(), false);
  for (std::size_t v : mapping) {
    if (v >= mapping.size() || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

void Permutation::validate() const {
  if (!is_valid()) {
    throw Error(ErrorKind::kInvalidArgument, "mapping is not a permutation");
  }
}

namespace {

double log_sum_exp(std::span<const double> v) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v) m = std::max(m, x);
  if (std::isinf(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

void check_table(std::size_t n, std::span<const double> log_probs,
                 std::size_t classes, double tol, bool skip_diagonal) {
  if (log_probs.size() != n * n * classes) {
    std::ostringstream os;
    os << "table of size " << n << " needs " << n * n * classes
       << " log-probabilities, got " << log_probs.size();
    throw Error(ErrorKind::kShapeMismatch, os.str());
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (skip_diagonal && i == j) continue;
      auto dist = log_probs.subspan((i * n + j) * classes, classes);
      for (double v : dist) {
        if (std::isnan(v) || v > tol) {
          throw Error(ErrorKind::kInvalidArgument, "entry is not a log-probability");
        }
      }
      if (std::abs(log_sum_exp(dist)) > tol) {
        std::ostringstream os;
        os << "relation distribution at (" << i << ", " << j
           << ") is not normalized";
        throw Error(ErrorKind::kNotNormalized, os.str());
      }
    }
  }
}

void check_sizes(std::size_t table_n, const Permutation& sigma) {
  if (sigma.size() != table_n) {
    throw Error(ErrorKind::kShapeMismatch,
                "permutation size differs from table size");
  }
  sigma.validate();
}

template <typename Table>
ScoredPermutation exhaustive_best(const Table& table) {
  const std::size_t n = table.size();
  if (n == 0) throw Error(ErrorKind::kEmptyInput, "empty relation table");
  if (n > kMaxExhaustive) {
    throw Error(ErrorKind::kTooLarge,
                "exhaustive search supports at most 8 elements, got " +
                    std::to_string(n));
  }
  Permutation sigma = Permutation::identity(n);
  ScoredPermutation best{sigma, score_permutation(table, sigma)};
  while (std::next_permutation(sigma.mapping.begin(), sigma.mapping.end())) {
    const double s = score_permutation(table, sigma);
    if (s > best.score) best = {sigma, s};
  }
  return best;
}

}  // namespace

RelationTable::RelationTable(std::size_t n, std::vector<double> log_probs,
                             double tol)
    : n_(n), log_probs_(std::move(log_probs)) {
  check_table(n_, log_probs_, kRelationClasses, tol, false);
}

FrameOrderTable::FrameOrderTable(std::size_t n, std::vector<double> log_probs,
                                 double tol)
    : n_(n), log_probs_(std::move(log_probs)) {
  check_table(n_, log_probs_, 2, tol, true);
}

MarginalOrderTable::MarginalOrderTable(std::size_t n, std::vector<double> log_probs,
                                       double tol)
    : n_(n), log_probs_(std::move(log_probs)) {
  check_table(n_, log_probs_, 2, tol, false);
}

MarginalOrderTable marginalize_order(const RelationTable& table) {
  const std::size_t n = table.size();
  std::vector<double> out(n * n * 2, std::log(0.5));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double pair[] = {table.log_prob(i, j, kBefore),
                             table.log_prob(i, j, kAfter)};
      const double z = log_sum_exp(pair);
      if (std::isinf(z)) continue;  // no ordering mass at all
      out[(i * n + j) * 2] = pair[0] - z;
      out[(i * n + j) * 2 + 1] = pair[1] - z;
    }
  }
  return MarginalOrderTable(n, std::move(out));
}

double score_permutation(const RelationTable& table, const Permutation& sigma) {
  check_sizes(table.size(), sigma);
  double score = 0.0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    for (std::size_t j = 0; j < table.size(); ++j) {
      const std::size_t pos = sigma.mapping[j];
      const RelationClass c = i == pos ? kSame : (i < pos ? kBefore : kAfter);
      score += table.log_prob(i, j, c);
    }
  }
  return score;
}

double score_permutation(const FrameOrderTable& table, const Permutation& sigma) {
  check_sizes(table.size(), sigma);
  double score = 0.0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    for (std::size_t j = 0; j < table.size(); ++j) {
      if (i == j) continue;
      score += sigma.mapping[i] < sigma.mapping[j] ? table.log_prob_before(i, j)
                                                   : table.log_prob_after(i, j);
    }
  }
  return score;
}

double score_permutation(const MarginalOrderTable& table, const Permutation& sigma) {
  check_sizes(table.size(), sigma);
  double score = 0.0;
  for (std::size_t i = 0; i < table.size(); ++i) {
    for (std::size_t j = 0; j < table.size(); ++j) {
      const std::size_t pos = sigma.mapping[j];
      if (i == pos) continue;
      score += i < pos ? table.log_prob_before(i, j) : table.log_prob_after(i, j);
    }
  }
  return score;
}

ScoredPermutation best_ordering(const RelationTable& table) {
  return exhaustive_best(table);
}

ScoredPermutation best_ordering(const FrameOrderTable& table) {
  return exhaustive_best(table);
}

ScoredPermutation best_ordering(const MarginalOrderTable& table) {
  return exhaustive_best(table);
}

// Kuhn-Munkres ---------------------------------------------------------------

namespace {

struct SquareSolution {
  std::vector<double> u, v;         // row and column potentials
  std::vector<std::size_t> col_of;  // row -> column
};

// Minimum-cost perfect matching on an n x n cost matrix, O(n^3), with dual
// potentials satisfying u[i] + v[j] <= cost(i, j), tight on the matching.
SquareSolution solve_min_cost(const Matrix& cost) {
  const std::size_t n = cost.rows();
  const double inf = std::numeric_limits<double>::infinity();
  // 1-based internals; index 0 is the virtual root column.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  std::vector<bool> used(n + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  SquareSolution s;
  s.u.assign(u.begin() + 1, u.end());
  s.v.assign(v.begin() + 1, v.end());
  s.col_of.assign(n, 0);
  for (std::size_t j = 1; j <= n; ++j) s.col_of[p[j] - 1] = j - 1;
  return s;
}

// Among the perfect matchings of the tight (zero reduced cost) subgraph,
// all of which are optimal, pick the lexicographically smallest by row.
class LexRepair {
 public:
  LexRepair(const Matrix& cost, const SquareSolution& sol, double tol)
      : n_(cost.rows()), tight_(n_ * n_, false), col_of_(sol.col_of),
        row_of_(n_), fixed_(n_, false) {
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < n_; ++j) {
        tight_[i * n_ + j] = std::abs(cost(i, j) - sol.u[i] - sol.v[j]) <= tol;
      }
    }
    for (std::size_t i = 0; i < n_; ++i) {
      tight_[i * n_ + col_of_[i]] = true;
      row_of_[col_of_[i]] = i;
    }
  }

  void run(std::size_t real_rows) {
    for (std::size_t r = 0; r < real_rows; ++r) {
      for (std::size_t c = 0; c < n_; ++c) {
        if (tight_[r * n_ + c] && try_force(r, c)) break;
      }
      fixed_[r] = true;
    }
  }

  const std::vector<std::size_t>& col_of() const { return col_of_; }

 private:
  bool try_force(std::size_t r, std::size_t c) {
    if (col_of_[r] == c) return true;
    const std::size_t displaced = row_of_[c];
    if (fixed_[displaced]) return false;
    const std::size_t freed = col_of_[r];
    // Find an alternating path that re-seats `displaced` and ends on `freed`.
    std::vector<bool> seen(n_, false);
    seen[c] = true;
    std::vector<std::pair<std::size_t, std::size_t>> path;
    blocked_row_ = r;
    if (!augment(displaced, freed, seen, path)) return false;
    col_of_[r] = c;
    row_of_[c] = r;
    for (const auto& [row, col] : path) {
      col_of_[row] = col;
      row_of_[col] = row;
    }
    return true;
  }

  bool augment(std::size_t row, std::size_t target, std::vector<bool>& seen,
               std::vector<std::pair<std::size_t, std::size_t>>& path) {
    for (std::size_t col = 0; col < n_; ++col) {
      if (seen[col] || !tight_[row * n_ + col]) continue;
      seen[col] = true;
      if (col == target) {
        path.emplace_back(row, col);
        return true;
      }
      const std::size_t next = row_of_[col];
      if (fixed_[next] || next == blocked_row_) continue;
      path.emplace_back(row, col);
      if (augment(next, target, seen, path)) return true;
      path.pop_back();
    }
    return false;
  }

  std::size_t n_;
  std::vector<bool> tight_;
  std::vector<std::size_t> col_of_, row_of_;
  std::vector<bool> fixed_;
  std::size_t blocked_row_ = 0;
};

}  // namespace

Assignment hungarian_match(const Matrix& similarity) {
  if (!similarity.all_finite()) {
    throw Error(ErrorKind::kNonFinite, "similarity matrix has non-finite entries");
  }
  const std::size_t rows = similarity.rows(), cols = similarity.cols();
  Assignment out;
  if (rows == 0 || cols == 0) return out;
  const std::size_t n = std::max(rows, cols);
  double scale = 1.0;
  Matrix cost(n, n, 0.0);  // padding rows/columns cost nothing
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      cost(i, j) = -similarity(i, j);
      scale = std::max(scale, std::abs(similarity(i, j)));
    }
  }
  const SquareSolution sol = solve_min_cost(cost);
  LexRepair repair(cost, sol, 1e-9 * scale * static_cast<double>(n));
  repair.run(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    const std::size_t j = repair.col_of()[i];
    if (j < cols) {
      out.pairs.emplace_back(i, j);
      out.total += similarity(i, j);
    }
  }
  return out;
}

Permutation matching_order(const Matrix& similarity) {
  if (similarity.rows() != similarity.cols()) {
    throw Error(ErrorKind::kShapeMismatch, "matching_order needs a square matrix");
  }
  Permutation p;
  p.mapping.assign(similarity.cols(), 0);
  for (const auto& [caption, frame] : hungarian_match(similarity).pairs) {
    p.mapping[frame] = caption;
  }
  return p;
}

// Metrics --------------------------------------------------------------------

StoryMetrics story_metrics(const Permutation& predicted, const Permutation& truth,
                           const MetricOptions& opts) {
  if (predicted.size() != truth.size()) {
    throw Error(ErrorKind::kShapeMismatch, "permutations differ in size");
  }
  predicted.validate();
  truth.validate();
  const std::size_t n = truth.size();
  if (n == 0) throw Error(ErrorKind::kEmptyInput, "empty permutation");
  StoryMetrics m;
  double sq = 0.0, abs_sum = 0.0;
  for (std::size_t e = 0; e < n; ++e) {
    const double d = static_cast<double>(predicted.mapping[e]) -
                     static_cast<double>(truth.mapping[e]);
    sq += d * d;
    abs_sum += std::abs(d);
  }
  const double nn = static_cast<double>(n);
  m.spearman = n < 2 ? 1.0 : 1.0 - 6.0 * sq / (nn * (nn * nn - 1.0));
  std::size_t agree = 0, pairs = 0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const bool p = predicted.mapping[a] < predicted.mapping[b];
      const bool t = truth.mapping[a] < truth.mapping[b];
      agree += p == t ? 1 : 0;
      ++pairs;
    }
  }
  m.pairwise_accuracy = pairs == 0 ? 1.0 : static_cast<double>(agree) / pairs;
  m.distance = opts.footrule_sum ? abs_sum : abs_sum / nn;
  return m;
}

namespace {

StoryEvalReport average(std::span<const StoryMetrics> per_story) {
  StoryEvalReport r;
  for (const StoryMetrics& m : per_story) {
    r.spearman += m.spearman;
    r.pairwise_accuracy += m.pairwise_accuracy;
    r.distance += m.distance;
  }
  r.n_stories = per_story.size();
  const double inv = 1.0 / static_cast<double>(r.n_stories);
  r.spearman *= inv;
  r.pairwise_accuracy *= inv;
  r.distance *= inv;
  return r;
}

Error with_story(std::size_t s, const Error& e) {
  return Error(e.kind(), "story " + std::to_string(s) + ": " + e.what());
}

}  // namespace

StoryEvalReport evaluate_story_set(std::span<const RelationTable> tables,
                                   std::span<const Permutation> truths,
                                   const MetricOptions& opts, std::size_t jobs) {
  if (tables.empty()) throw Error(ErrorKind::kEmptyInput, "no stories");
  if (tables.size() != truths.size()) {
    throw Error(ErrorKind::kShapeMismatch, "tables and truths differ in count");
  }
  const std::size_t n = tables.size();
  std::vector<StoryMetrics> metrics(n);
  std::vector<std::exception_ptr> errors(n);
  auto work = [&](std::size_t begin, std::size_t step) {
    for (std::size_t s = begin; s < n; s += step) {
      try {
        metrics[s] = story_metrics(best_ordering(tables[s]).permutation,
                                   truths[s], opts);
      } catch (const Error& e) {
        errors[s] = std::make_exception_ptr(with_story(s, e));
      }
    }
  };
  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  if (jobs == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(work, t, jobs);
    for (std::thread& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return average(metrics);
}

StoryEvalReport evaluate_predictions(std::span<const Permutation> predicted,
                                     std::span<const Permutation> truths,
                                     const MetricOptions& opts) {
  if (predicted.empty()) throw Error(ErrorKind::kEmptyInput, "no stories");
  if (predicted.size() != truths.size()) {
    throw Error(ErrorKind::kShapeMismatch, "predictions and truths differ in count");
  }
  std::vector<StoryMetrics> metrics;
  for (std::size_t s = 0; s < predicted.size(); ++s) {
    try {
      metrics.push_back(story_metrics(predicted[s], truths[s], opts));
    } catch (const Error& e) {
      throw with_story(s, e);
    }
  }
  return average(metrics);
}

}  // namespace vidscript::reorder

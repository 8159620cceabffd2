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

// Zero-shot story unscrambling: captions arrive in their true order, frames
// shuffled. A permutation of the frames is scored by summing pairwise
// relation log-probabilities, the best one is found by exhaustive search,
// and predictions are graded with rank correlation, pairwise accuracy and
// mean displacement. A max-weight bipartite matching baseline is included.

#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "vidscript/matrix.hpp"

namespace vidscript::reorder {

inline constexpr std::size_t kMaxExhaustive = 8;

// mapping[j] = position assigned to frame j.
struct Permutation {
  std::vector<std::size_t> mapping;

  static Permutation identity(std::size_t n);
  std::size_t size() const { return mapping.size(); }
  bool is_valid() const;
  // Throws Error(kInvalidArgument) when not a bijection on [0, n).
  void validate() const;
  bool operator==(const Permutation&) const = default;
};

enum RelationClass : std::size_t { kSame = 0, kBefore = 1, kAfter = 2, kDifferent = 3 };
inline constexpr std::size_t kRelationClasses = 4;

// Log-probabilities of (caption i, frame j) relations: the caption and frame
// are the same segment, the caption comes before the frame, after it, or
// from another video.
class RelationTable {
 public:
  RelationTable() = default;
  // log_probs laid out as [(i * n + j) * 4 + class]. Checks that every
  // (i, j) distribution is normalized within `tol`.
  RelationTable(std::size_t n, std::vector<double> log_probs, double tol = 1e-6);

  std::size_t size() const { return n_; }
  double log_prob(std::size_t caption, std::size_t frame, RelationClass c) const {
    return log_probs_[(caption * n_ + frame) * kRelationClasses + c];
  }
  std::span<const double> raw() const { return log_probs_; }

 private:
  std::size_t n_ = 0;
  std::vector<double> log_probs_;
};

// Two-class frame/frame table: entry (i, j) holds log p(frame i precedes
// frame j) and log p(frame i follows frame j). Diagonal entries are ignored.
class FrameOrderTable {
 public:
  FrameOrderTable() = default;
  FrameOrderTable(std::size_t n, std::vector<double> log_probs, double tol = 1e-6);

  std::size_t size() const { return n_; }
  double log_prob_before(std::size_t i, std::size_t j) const {
    return log_probs_[(i * n_ + j) * 2];
  }
  double log_prob_after(std::size_t i, std::size_t j) const {
    return log_probs_[(i * n_ + j) * 2 + 1];
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> log_probs_;
};

// Sum over all (caption i, frame j) of log p(relation of i to sigma[j]).
// Keeps only the before/after mass of every (i, j) entry and renormalizes
// it into a two-way table. Diagonal entries become uniform.
// Caption/frame table reduced to {before, after}: the same coordinates as
// RelationTable, with the pair (i, sigma(j)) on the diagonal left out of the
// score.
class MarginalOrderTable {
 public:
  MarginalOrderTable() = default;
  MarginalOrderTable(std::size_t n, std::vector<double> log_probs, double tol = 1e-6);

  std::size_t size() const { return n_; }
  double log_prob_before(std::size_t caption, std::size_t frame) const {
    return log_probs_[(caption * n_ + frame) * 2];
  }
  double log_prob_after(std::size_t caption, std::size_t frame) const {
    return log_probs_[(caption * n_ + frame) * 2 + 1];
  }

 private:
  std::size_t n_ = 0;
  std::vector<double> log_probs_;
};

// Keeps before/after and renormalizes each pair; pairs with no ordering
// mass become uniform.
MarginalOrderTable marginalize_order(const RelationTable& table);

double score_permutation(const RelationTable& table, const Permutation& sigma);
// Sum over ordered frame pairs i != j.
double score_permutation(const FrameOrderTable& table, const Permutation& sigma);
double score_permutation(const MarginalOrderTable& table, const Permutation& sigma);

struct ScoredPermutation {
  Permutation permutation;
  double score = 0.0;
};

// Exhaustive argmax over all n! permutations in lexicographic order; the
// first maximum wins. Throws Error(kTooLarge) for n > kMaxExhaustive.
ScoredPermutation best_ordering(const RelationTable& table);
ScoredPermutation best_ordering(const FrameOrderTable& table);
ScoredPermutation best_ordering(const MarginalOrderTable& table);

struct Assignment {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (row, col), by row
  double total = 0.0;
};

// Maximum-weight one-to-one assignment of min(rows, cols) pairs
// (Kuhn-Munkres). Among optimal assignments, the lexicographically smallest
// column sequence by row is returned. Throws Error(kNonFinite).
Assignment hungarian_match(const Matrix& similarity);

// Matching baseline: frame j goes to the caption it is assigned to.
// similarity is captions x frames and must be square.
Permutation matching_order(const Matrix& similarity);

struct MetricOptions {
  bool footrule_sum = false;  // report summed, not mean, displacement
};

struct StoryMetrics {
  double spearman = 0.0;
  double pairwise_accuracy = 0.0;
  double distance = 0.0;
};

// Element e sits at predicted.mapping[e] vs truth.mapping[e]. For n = 1 the
// correlation and pairwise accuracy are defined as 1.
StoryMetrics story_metrics(const Permutation& predicted, const Permutation& truth,
                           const MetricOptions& opts = {});

struct StoryEvalReport {
  double spearman = 0.0;
  double pairwise_accuracy = 0.0;
  double distance = 0.0;
  std::size_t n_stories = 0;
};

// Per-story best ordering and metrics, macro-averaged in story order.
// `jobs` > 1 spreads stories over threads; the result does not depend on it.
StoryEvalReport evaluate_story_set(std::span<const RelationTable> tables,
                                   std::span<const Permutation> truths,
                                   const MetricOptions& opts = {},
                                   std::size_t jobs = 1);

StoryEvalReport evaluate_predictions(std::span<const Permutation> predicted,
                                     std::span<const Permutation> truths,
                                     const MetricOptions& opts = {});

}  // namespace vidscript::reorder

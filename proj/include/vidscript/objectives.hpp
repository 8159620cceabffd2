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

// Pretraining losses as plain functions of externally produced embeddings
// and logits. Everything is double precision; gradients are analytic.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "vidscript/common.hpp"
#include "vidscript/matrix.hpp"
#include "vidscript/tokenizer.hpp"

namespace vidscript::objectives {

inline constexpr double kDefaultTemperature = 0.05;
inline constexpr double kDefaultContrastiveCoeff = 0.25;
inline constexpr double kNormTolerance = 1e-6;

struct LossReport {
  double value = 0.0;
  // Filled on request, one per differentiable input, in argument order.
  std::vector<Matrix> gradients;
};

// Rows scaled to unit Euclidean norm. Throws Error(kZeroVector) for a zero
// row and Error(kNonFinite) for non-finite entries.
Matrix l2_normalize(const Matrix& m);

// x * w^T + b, i.e. each row of x mapped through the affine layer (w is
// out_dim x in_dim).
Matrix affine(const Matrix& x, const Matrix& w, std::span<const double> b);

enum class ContrastiveDirection { kSymmetric, kRowOnly };

// In-batch contrastive matching. logits = frames * captions^T / tau, row i of
// both matrices is a positive pair and every other pairing a negative. The
// symmetric loss averages frame->caption (row) and caption->frame (column)
// cross-entropies. Inputs must already be unit-normalized.
//
// gradients (when want_grads): [d/d frames, d/d captions].
LossReport contrastive_loss(
    const Matrix& frames, const Matrix& captions,
    double tau = kDefaultTemperature, bool want_grads = false,
    ContrastiveDirection direction = ContrastiveDirection::kSymmetric);

// Mean cross-entropy of `logits` (B x V) over positions whose label is not
// masking::kIgnoreLabel. gradients: [d/d logits].
LossReport masked_lm_loss(const Matrix& logits, std::span<const TokenId> labels,
                          bool want_grads = false);

enum class Activation { kGelu, kRelu };

// Two-layer perceptron over the concatenation of two hidden states.
struct OrderHeadParams {
  Matrix w1;               // hidden x (2 * dim)
  std::vector<double> b1;  // hidden
  Matrix w2;               // classes x hidden
  std::vector<double> b2;  // classes
  Activation activation = Activation::kGelu;

  std::size_t input_dim() const { return w1.cols() / 2; }
  std::size_t classes() const { return w2.rows(); }
  void validate() const;
};

// Relation classes of the pairwise temporal heads.
enum class FramePairClass { kBefore = 0, kAfter = 1 };
enum class CaptionFrameClass { kSame = 0, kBefore = 1, kAfter = 2, kDifferent = 3 };

std::vector<double> order_logits(std::span<const double> h_i,
                                 std::span<const double> h_j,
                                 const OrderHeadParams& params);

struct OrderHeadGrads {
  std::vector<double> h_i, h_j;
  Matrix w1;
  std::vector<double> b1;
  Matrix w2;
  std::vector<double> b2;
};

// Backpropagates d loss / d logits through order_logits.
OrderHeadGrads order_head_backward(std::span<const double> h_i,
                                   std::span<const double> h_j,
                                   const OrderHeadParams& params,
                                   std::span<const double> d_logits);

// Mean cross-entropy over pairs. gradients: [d/d logits] as a
// pairs x classes matrix (all logit vectors must have the same length).
LossReport ordering_loss(std::span<const std::vector<double>> logits,
                         std::span<const std::size_t> true_classes,
                         bool want_grads = false);

// mask_lm + coeff * contrastive + ordering.
double combine_losses(double mask_lm, double contrastive, double ordering,
                      double contrastive_coeff = kDefaultContrastiveCoeff);

// Frame scrambling draw for the temporal objective: with probability
// `prob` choose i uniformly in [2, n], pick i distinct frames, and give each
// a distinct placeholder position id in [0, n).
struct ScramblePlan {
  std::vector<std::size_t> frames;           // ascending
  std::vector<std::size_t> placeholder_ids;  // parallel to frames
};

ScramblePlan sample_scramble(std::size_t n_frames, Rng& rng, double prob = 0.4);

double gelu(double x);
double gelu_grad(double x);

}  // namespace vidscript::objectives

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

#include "vidscript/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "vidscript/masking.hpp"

namespace vidscript::objectives {

namespace {

void require_finite(const Matrix& m, const char* what) {
  if (!m.all_finite()) {
    throw Error(ErrorKind::kNonFinite, std::string(what) + " has non-finite entries");
  }
}

// log(sum(exp(v))) with the largest term factored out; the remainder goes
// through log1p so near-saturated rows keep full precision.
double log_sum_exp(std::span<const double> v) {
  std::size_t arg = 0;
  for (std::size_t k = 1; k < v.size(); ++k) {
    if (v[k] > v[arg]) arg = k;
  }
  const double m = v[arg];
  double rest = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (k != arg) rest += std::exp(v[k] - m);
  }
  return m + std::log1p(rest);
}

void softmax_into(std::span<const double> v, double lse, std::span<double> out) {
  for (std::size_t k = 0; k < v.size(); ++k) out[k] = std::exp(v[k] - lse);
}

}  // namespace

Matrix l2_normalize(const Matrix& m) {
  require_finite(m, "l2_normalize input");
  Matrix out = m;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const double n = l2_norm(m.row(r));
    if (n == 0.0) {
      throw Error(ErrorKind::kZeroVector,
                  "row " + std::to_string(r) + " has zero norm");
    }
    for (double& x : out.row(r)) x /= n;
  }
  return out;
}

Matrix affine(const Matrix& x, const Matrix& w, std::span<const double> b) {
  if (x.cols() != w.cols() || b.size() != w.rows()) {
    throw Error(ErrorKind::kShapeMismatch, "affine: incompatible shapes");
  }
  Matrix out(x.rows(), w.rows());
  for (std::size_t r = 0; r < x.rows(); ++r) {
    for (std::size_t o = 0; o < w.rows(); ++o) {
      out(r, o) = dot(x.row(r), w.row(o)) + b[o];
    }
  }
  return out;
}

LossReport contrastive_loss(const Matrix& frames, const Matrix& captions,
                            double tau, bool want_grads,
                            ContrastiveDirection direction) {
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    std::ostringstream os;
    os << "temperature must be positive and finite (got " << tau
       << "); logits are divided by it";
    throw Error(ErrorKind::kInvalidArgument, os.str());
  }
  if (frames.rows() != captions.rows() || frames.cols() != captions.cols()) {
    throw Error(ErrorKind::kShapeMismatch,
                "frames and captions must have identical shapes");
  }
  if (frames.rows() == 0 || frames.cols() == 0) {
    throw Error(ErrorKind::kShapeMismatch, "empty embedding matrix");
  }
  require_finite(frames, "frames");
  require_finite(captions, "captions");
  for (const Matrix* m : {&frames, &captions}) {
    for (std::size_t r = 0; r < m->rows(); ++r) {
      if (std::abs(l2_norm(m->row(r)) - 1.0) > kNormTolerance) {
        throw Error(ErrorKind::kNotNormalized,
                    "row " + std::to_string(r) + " is not unit-normalized");
      }
    }
  }

  const std::size_t B = frames.rows(), D = frames.cols();
  Matrix logits(B, B);
  for (std::size_t i = 0; i < B; ++i) {
    for (std::size_t j = 0; j < B; ++j) {
      logits(i, j) = dot(frames.row(i), captions.row(j)) / tau;
    }
  }
  const double inv_b = 1.0 / static_cast<double>(B);
  const bool symmetric = direction == ContrastiveDirection::kSymmetric;
  // d loss / d logits, accumulated per direction.
  Matrix g(B, B, 0.0);
  std::vector<double> buf(B), prob(B);

  double row_loss = 0.0;
  for (std::size_t i = 0; i < B; ++i) {
    const double lse = log_sum_exp(logits.row(i));
    row_loss += lse - logits(i, i);
    if (want_grads) {
      softmax_into(logits.row(i), lse, prob);
      for (std::size_t j = 0; j < B; ++j) {
        g(i, j) += (prob[j] - (i == j ? 1.0 : 0.0)) * inv_b;
      }
    }
  }
  row_loss *= inv_b;

  double col_loss = 0.0;
  if (symmetric) {
    for (std::size_t j = 0; j < B; ++j) {
      for (std::size_t i = 0; i < B; ++i) buf[i] = logits(i, j);
      const double lse = log_sum_exp(buf);
      col_loss += lse - logits(j, j);
      if (want_grads) {
        softmax_into(buf, lse, prob);
        for (std::size_t i = 0; i < B; ++i) {
          g(i, j) += (prob[i] - (i == j ? 1.0 : 0.0)) * inv_b;
        }
      }
    }
    col_loss *= inv_b;
  }

  LossReport report;
  report.value = symmetric ? 0.5 * (row_loss + col_loss) : row_loss;
  if (want_grads) {
    const double scale = (symmetric ? 0.5 : 1.0) / tau;
    Matrix df(B, D, 0.0), dc(B, D, 0.0);
    for (std::size_t i = 0; i < B; ++i) {
      for (std::size_t j = 0; j < B; ++j) {
        const double gij = g(i, j) * scale;
        if (gij == 0.0) continue;
        for (std::size_t d = 0; d < D; ++d) {
          df(i, d) += gij * captions(j, d);
          dc(j, d) += gij * frames(i, d);
        }
      }
    }
    report.gradients.push_back(std::move(df));
    report.gradients.push_back(std::move(dc));
  }
  return report;
}

LossReport masked_lm_loss(const Matrix& logits, std::span<const TokenId> labels,
                          bool want_grads) {
  if (logits.rows() != labels.size()) {
    throw Error(ErrorKind::kShapeMismatch, "one label per logit row required");
  }
  require_finite(logits, "logits");
  const std::size_t V = logits.cols();
  std::size_t counted = 0;
  for (std::size_t b = 0; b < labels.size(); ++b) {
    if (labels[b] == masking::kIgnoreLabel) continue;
    if (labels[b] < 0 || static_cast<std::size_t>(labels[b]) >= V) {
      throw Error(ErrorKind::kOutOfRange,
                  "label " + std::to_string(labels[b]) + " outside vocabulary");
    }
    ++counted;
  }
  if (counted == 0) {
    throw Error(ErrorKind::kEmptyInput, "every position carries the ignore label");
  }
  LossReport report;
  Matrix grad;
  if (want_grads) grad = Matrix(logits.rows(), V, 0.0);
  const double inv = 1.0 / static_cast<double>(counted);
  std::vector<double> prob(V);
  for (std::size_t b = 0; b < labels.size(); ++b) {
    if (labels[b] == masking::kIgnoreLabel) continue;
    const double lse = log_sum_exp(logits.row(b));
    report.value += lse - logits(b, static_cast<std::size_t>(labels[b]));
    if (want_grads) {
      softmax_into(logits.row(b), lse, prob);
      for (std::size_t v = 0; v < V; ++v) {
        grad(b, v) = (prob[v] - (static_cast<TokenId>(v) == labels[b] ? 1.0 : 0.0)) * inv;
      }
    }
  }
  report.value *= inv;
  if (want_grads) report.gradients.push_back(std::move(grad));
  return report;
}

double gelu(double x) {
  return 0.5 * x * (1.0 + std::erf(x / std::numbers::sqrt2));
}

double gelu_grad(double x) {
  const double cdf = 0.5 * (1.0 + std::erf(x / std::numbers::sqrt2));
  const double pdf = std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
  return cdf + x * pdf;
}

namespace {

double activate(Activation a, double x) {
  return a == Activation::kGelu ? gelu(x) : std::max(0.0, x);
}

double activate_grad(Activation a, double x) {
  return a == Activation::kGelu ? gelu_grad(x) : (x > 0.0 ? 1.0 : 0.0);
}

std::vector<double> concat(std::span<const double> a, std::span<const double> b) {
  std::vector<double> out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace

void OrderHeadParams::validate() const {
  if (w1.rows() == 0 || w1.cols() == 0 || w1.cols() % 2 != 0) {
    throw Error(ErrorKind::kShapeMismatch,
                "order head: first layer needs a positive even input width");
  }
  if (b1.size() != w1.rows() || w2.cols() != w1.rows() ||
      b2.size() != w2.rows() || w2.rows() == 0) {
    throw Error(ErrorKind::kShapeMismatch,
                "order head: layer dimensions do not chain");
  }
}

std::vector<double> order_logits(std::span<const double> h_i,
                                 std::span<const double> h_j,
                                 const OrderHeadParams& params) {
  params.validate();
  if (h_i.size() != params.input_dim() || h_j.size() != params.input_dim()) {
    throw Error(ErrorKind::kShapeMismatch,
                "order head: hidden state width differs from the head input");
  }
  const std::vector<double> x = concat(h_i, h_j);
  std::vector<double> hidden(params.w1.rows());
  for (std::size_t h = 0; h < hidden.size(); ++h) {
    hidden[h] = activate(params.activation, dot(params.w1.row(h), x) + params.b1[h]);
  }
  std::vector<double> out(params.classes());
  for (std::size_t c = 0; c < out.size(); ++c) {
    out[c] = dot(params.w2.row(c), hidden) + params.b2[c];
  }
  return out;
}

OrderHeadGrads order_head_backward(std::span<const double> h_i,
                                   std::span<const double> h_j,
                                   const OrderHeadParams& params,
                                   std::span<const double> d_logits) {
  params.validate();
  const std::size_t dim = params.input_dim();
  if (h_i.size() != dim || h_j.size() != dim ||
      d_logits.size() != params.classes()) {
    throw Error(ErrorKind::kShapeMismatch, "order head backward: shape mismatch");
  }
  const std::vector<double> x = concat(h_i, h_j);
  const std::size_t H = params.w1.rows(), C = params.classes();
  std::vector<double> pre(H), act(H);
  for (std::size_t h = 0; h < H; ++h) {
    pre[h] = dot(params.w1.row(h), x) + params.b1[h];
    act[h] = activate(params.activation, pre[h]);
  }
  OrderHeadGrads g;
  g.w2 = Matrix(C, H, 0.0);
  g.b2.assign(d_logits.begin(), d_logits.end());
  std::vector<double> d_act(H, 0.0);
  for (std::size_t c = 0; c < C; ++c) {
    for (std::size_t h = 0; h < H; ++h) {
      g.w2(c, h) = d_logits[c] * act[h];
      d_act[h] += d_logits[c] * params.w2(c, h);
    }
  }
  g.b1.resize(H);
  g.w1 = Matrix(H, 2 * dim, 0.0);
  std::vector<double> dx(2 * dim, 0.0);
  for (std::size_t h = 0; h < H; ++h) {
    const double d_pre = d_act[h] * activate_grad(params.activation, pre[h]);
    g.b1[h] = d_pre;
    for (std::size_t k = 0; k < 2 * dim; ++k) {
      g.w1(h, k) = d_pre * x[k];
      dx[k] += d_pre * params.w1(h, k);
    }
  }
  g.h_i.assign(dx.begin(), dx.begin() + static_cast<std::ptrdiff_t>(dim));
  g.h_j.assign(dx.begin() + static_cast<std::ptrdiff_t>(dim), dx.end());
  return g;
}

LossReport ordering_loss(std::span<const std::vector<double>> logits,
                         std::span<const std::size_t> true_classes,
                         bool want_grads) {
  if (logits.empty()) {
    throw Error(ErrorKind::kEmptyInput, "ordering_loss: no pairs");
  }
  if (logits.size() != true_classes.size()) {
    throw Error(ErrorKind::kShapeMismatch,
                "ordering_loss: one class per logit vector required");
  }
  const std::size_t C = logits.front().size();
  for (std::size_t p = 0; p < logits.size(); ++p) {
    if (logits[p].size() != C || C == 0) {
      throw Error(ErrorKind::kShapeMismatch,
                  "ordering_loss: logit vectors differ in length");
    }
    if (true_classes[p] >= C) {
      throw Error(ErrorKind::kOutOfRange,
                  "class " + std::to_string(true_classes[p]) + " out of range");
    }
    for (double v : logits[p]) {
      if (!std::isfinite(v)) throw Error(ErrorKind::kNonFinite, "non-finite logit");
    }
  }
  const double inv = 1.0 / static_cast<double>(logits.size());
  LossReport report;
  Matrix grad;
  if (want_grads) grad = Matrix(logits.size(), C, 0.0);
  std::vector<double> prob(C);
  for (std::size_t p = 0; p < logits.size(); ++p) {
    const double lse = log_sum_exp(logits[p]);
    report.value += lse - logits[p][true_classes[p]];
    if (want_grads) {
      softmax_into(logits[p], lse, prob);
      for (std::size_t c = 0; c < C; ++c) {
        grad(p, c) = (prob[c] - (c == true_classes[p] ? 1.0 : 0.0)) * inv;
      }
    }
  }
  report.value *= inv;
  if (want_grads) report.gradients.push_back(std::move(grad));
  return report;
}

double combine_losses(double mask_lm, double contrastive, double ordering,
                      double contrastive_coeff) {
  for (double v : {mask_lm, contrastive, ordering, contrastive_coeff}) {
    if (!std::isfinite(v)) {
      throw Error(ErrorKind::kNonFinite, "combine_losses: non-finite input");
    }
  }
  return mask_lm + contrastive_coeff * contrastive + ordering;
}

ScramblePlan sample_scramble(std::size_t n_frames, Rng& rng, double prob) {
  ScramblePlan plan;
  if (n_frames < 2 || !rng.bernoulli(prob)) return plan;
  const std::size_t count = 2 + rng.index(n_frames - 1);  // uniform in [2, n]
  std::vector<std::size_t> order(n_frames), ids(n_frames);
  for (std::size_t k = 0; k < n_frames; ++k) order[k] = ids[k] = k;
  // Partial Fisher-Yates for both the frames and their placeholder ids.
  for (std::size_t k = 0; k < count; ++k) {
    std::swap(order[k], order[k + rng.index(n_frames - k)]);
    std::swap(ids[k], ids[k + rng.index(n_frames - k)]);
  }
  std::vector<std::pair<std::size_t, std::size_t>> chosen;
  for (std::size_t k = 0; k < count; ++k) chosen.emplace_back(order[k], ids[k]);
  std::sort(chosen.begin(), chosen.end());
  for (const auto& [f, id] : chosen) {
    plan.frames.push_back(f);
    plan.placeholder_ids.push_back(id);
  }
  return plan;
}

}  // namespace vidscript::objectives

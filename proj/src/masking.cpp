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

#include "vidscript/masking.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

namespace vidscript::masking {

std::string_view action_name(MaskAction a) {
  switch (a) {
    case MaskAction::kMaskToken: return "mask";
    case MaskAction::kRandomToken: return "random";
    case MaskAction::kKeep: return "keep";
  }
  return "unknown";
}

void AttentionProfile::validate() const {
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0) {
      throw Error(ErrorKind::kNonFinite,
                  "attention weights must be finite and non-negative");
    }
  }
  for (std::size_t p : special_positions) {
    if (p >= weights.size()) {
      throw Error(ErrorKind::kOutOfRange, "special position beyond sequence");
    }
  }
}

std::vector<std::size_t> AttentionProfile::maskable_positions() const {
  std::vector<bool> special(weights.size(), false);
  for (std::size_t p : special_positions) {
    if (p < special.size()) special[p] = true;
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!special[i]) out.push_back(i);
  }
  return out;
}

void MaskConfig::validate() const {
  for (double p : {rate, attended_share, top_frac, mask_token_prob,
                   random_token_prob}) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw Error(ErrorKind::kInvalidArgument,
                  "masking probabilities must lie in [0, 1]");
    }
  }
  if (mask_token_prob + random_token_prob > 1.0 + 1e-12) {
    throw Error(ErrorKind::kInvalidArgument,
                "mask + random token probabilities exceed 1");
  }
  if (!(span_mean >= 0.0) || !std::isfinite(span_mean)) {
    throw Error(ErrorKind::kInvalidArgument, "span mean must be >= 0");
  }
}

std::vector<std::size_t> attended_set(const AttentionProfile& profile,
                                      double top_frac) {
  profile.validate();
  std::vector<std::size_t> maskable = profile.maskable_positions();
  const auto k = static_cast<std::size_t>(
      std::ceil(top_frac * static_cast<double>(maskable.size())));
  std::stable_sort(maskable.begin(), maskable.end(),
                   [&](std::size_t a, std::size_t b) {
                     return profile.weights[a] > profile.weights[b];
                   });
  maskable.resize(std::min(k, maskable.size()));
  std::sort(maskable.begin(), maskable.end());
  return maskable;
}

namespace {

// Uniform draw from `pool` avoiding taken positions; nullopt if exhausted.
std::optional<std::size_t> draw_untaken(std::span<const std::size_t> pool,
                                        const std::vector<bool>& taken,
                                        Rng& rng) {
  if (pool.empty()) return std::nullopt;
  for (int attempt = 0; attempt < 64; ++attempt) {
    const std::size_t p = pool[rng.index(pool.size())];
    if (!taken[p]) return p;
  }
  std::vector<std::size_t> free;
  for (std::size_t p : pool) {
    if (!taken[p]) free.push_back(p);
  }
  if (free.empty()) return std::nullopt;
  return free[rng.index(free.size())];
}

MaskAction draw_action(Rng& rng, const MaskConfig& cfg) {
  const double u = rng.uniform01();
  if (u < cfg.mask_token_prob) return MaskAction::kMaskToken;
  if (u < cfg.mask_token_prob + cfg.random_token_prob) {
    return MaskAction::kRandomToken;
  }
  return MaskAction::kKeep;
}

}  // namespace

MaskPlan select_targets(std::size_t n_tokens, const AttentionProfile& profile,
                        Rng& rng, const MaskConfig& cfg) {
  cfg.validate();
  if (profile.weights.size() != n_tokens) {
    throw Error(ErrorKind::kShapeMismatch,
                "attention profile length differs from token count");
  }
  profile.validate();
  MaskPlan plan;
  const std::vector<std::size_t> maskable = profile.maskable_positions();
  if (maskable.empty()) return plan;
  const std::vector<std::size_t> attended = attended_set(profile, cfg.top_frac);
  std::vector<bool> special(n_tokens, false);
  for (std::size_t p : profile.special_positions) special[p] = true;

  const auto n_seeds = static_cast<std::size_t>(
      std::llround(cfg.rate * static_cast<double>(maskable.size())));
  const double geo_p = cfg.span_mean / (1.0 + cfg.span_mean);

  std::vector<bool> taken(n_tokens, false);
  for (std::size_t s = 0; s < n_seeds; ++s) {
    MaskSeed seed;
    seed.from_attended = rng.bernoulli(cfg.attended_share);
    std::optional<std::size_t> pos;
    if (seed.from_attended) pos = draw_untaken(attended, taken, rng);
    if (!pos) {
      seed.from_attended = false;
      pos = draw_untaken(maskable, taken, rng);
    }
    seed.position = *pos;  // n_seeds <= |maskable| so this always succeeds
    taken[seed.position] = true;
    seed.left_extension = rng.geometric(geo_p);
    seed.right_extension = rng.geometric(geo_p);
    seed.action = draw_action(rng, cfg);
    plan.seeds.push_back(seed);
  }

  std::vector<std::optional<MaskAction>> assigned(n_tokens);
  for (const MaskSeed& seed : plan.seeds) assigned[seed.position] = seed.action;
  for (const MaskSeed& seed : plan.seeds) {
    for (std::size_t d = 1; d <= seed.left_extension && d <= seed.position; ++d) {
      const std::size_t p = seed.position - d;
      if (special[p]) break;
      if (!assigned[p]) assigned[p] = seed.action;
    }
    for (std::size_t d = 1; d <= seed.right_extension; ++d) {
      const std::size_t p = seed.position + d;
      if (p >= n_tokens || special[p]) break;
      if (!assigned[p]) assigned[p] = seed.action;
    }
  }
  for (std::size_t p = 0; p < n_tokens; ++p) {
    if (assigned[p]) {
      plan.targets.push_back(p);
      plan.actions.push_back(*assigned[p]);
    }
  }
  return plan;
}

VocabInfo VocabInfo::from(const Tokenizer& tokenizer) {
  return VocabInfo{tokenizer.vocab_size(), tokenizer.mask_id(),
                   {tokenizer.eot_id(), tokenizer.mask_id(), tokenizer.cls_id()}};
}

MaskedSequence apply_plan(std::span<const TokenId> tokens, const MaskPlan& plan,
                          Rng& rng, const VocabInfo& vocab) {
  if (plan.targets.size() != plan.actions.size()) {
    throw Error(ErrorKind::kShapeMismatch, "plan targets/actions differ in size");
  }
  MaskedSequence out;
  out.tokens.assign(tokens.begin(), tokens.end());
  out.labels.assign(tokens.size(), kIgnoreLabel);
  auto is_special = [&](TokenId id) {
    return std::find(vocab.special_ids.begin(), vocab.special_ids.end(), id) !=
           vocab.special_ids.end();
  };
  for (std::size_t k = 0; k < plan.targets.size(); ++k) {
    const std::size_t p = plan.targets[k];
    if (p >= tokens.size()) {
      throw Error(ErrorKind::kOutOfRange,
                  "mask target " + std::to_string(p) + " beyond sequence");
    }
    out.labels[p] = tokens[p];
    switch (plan.actions[k]) {
      case MaskAction::kMaskToken:
        out.tokens[p] = vocab.mask_id;
        break;
      case MaskAction::kRandomToken: {
        if (vocab.vocab_size <= static_cast<std::int32_t>(vocab.special_ids.size())) {
          throw Error(ErrorKind::kInvalidArgument,
                      "vocabulary has no non-special ids");
        }
        TokenId id;
        do {
          id = static_cast<TokenId>(
              rng.index(static_cast<std::uint64_t>(vocab.vocab_size)));
        } while (is_special(id));
        out.tokens[p] = id;
        break;
      }
      case MaskAction::kKeep:
        break;
    }
  }
  return out;
}

}  // namespace vidscript::masking

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

// Attention-guided span masking for masked language modeling.
//
// A fixed fraction of the maskable positions are drawn as seeds. Each seed
// comes, with probability `attended_share`, from the most-attended
// positions (by a pre-aggregated per-token attention weight), otherwise
// uniformly from all maskable positions. Seeds are then widened by a
// geometric number of neighbours on each side, and each resulting span is
// replaced by MASK, a random token, or left as is.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "vidscript/common.hpp"
#include "vidscript/tokenizer.hpp"

namespace vidscript::masking {

inline constexpr TokenId kIgnoreLabel = -100;

struct AttentionProfile {
  std::vector<double> weights;  // one per token position
  std::vector<std::size_t> special_positions;  // never masked

  // Throws on non-finite or negative weights, or out-of-range specials.
  void validate() const;
  std::vector<std::size_t> maskable_positions() const;
};

enum class MaskAction { kMaskToken, kRandomToken, kKeep };

std::string_view action_name(MaskAction a);

struct MaskConfig {
  double rate = 0.20;            // seeds per maskable position
  double attended_share = 0.50;  // seeds drawn from the attended set
  double top_frac = 0.20;        // size of the attended set
  double span_mean = 0.5;        // mean extension per direction
  double mask_token_prob = 0.8;
  double random_token_prob = 0.1;  // keep gets the remainder

  void validate() const;
};

struct MaskSeed {
  std::size_t position = 0;
  bool from_attended = false;
  std::size_t left_extension = 0;   // as drawn, before clipping
  std::size_t right_extension = 0;
  MaskAction action = MaskAction::kMaskToken;

  bool operator==(const MaskSeed&) const = default;
};

struct MaskPlan {
  std::vector<std::size_t> targets;  // ascending
  std::vector<MaskAction> actions;   // parallel to targets
  std::vector<MaskSeed> seeds;       // in draw order

  bool operator==(const MaskPlan&) const = default;
};

// The ceil(top_frac * maskable) maskable positions with the largest weight;
// ties go to the lower index. Result is ascending.
std::vector<std::size_t> attended_set(const AttentionProfile& profile,
                                      double top_frac = 0.20);

// Draws round(rate * maskable) distinct seeds and widens them. Extensions
// stop at sequence bounds and at special positions; widened positions take
// their seed's action, and where spans collide a seed position keeps its own
// action, otherwise the earlier-drawn seed wins.
MaskPlan select_targets(std::size_t n_tokens, const AttentionProfile& profile,
                        Rng& rng, const MaskConfig& cfg = {});

struct VocabInfo {
  std::int32_t vocab_size = 0;
  TokenId mask_id = 0;
  std::vector<TokenId> special_ids;  // excluded from random replacement

  static VocabInfo from(const Tokenizer& tokenizer);
};

struct MaskedSequence {
  std::vector<TokenId> tokens;
  std::vector<TokenId> labels;  // original id at targets, kIgnoreLabel elsewhere
};

// Throws Error(kOutOfRange) for a target beyond the sequence.
MaskedSequence apply_plan(std::span<const TokenId> tokens, const MaskPlan& plan,
                          Rng& rng, const VocabInfo& vocab);

}  // namespace vidscript::masking

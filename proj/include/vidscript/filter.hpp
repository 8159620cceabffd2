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

// Video retention gates over metadata and thumbnail classifier outputs.

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "vidscript/corpus.hpp"
#include "vidscript/matrix.hpp"

namespace vidscript::filter {

inline constexpr std::size_t kThumbnails = 4;

enum class Reason {
  kNoAsr,
  kTooLong,
  kGamingCategory,
  kTooFewObjects,
  kStaticVisuals,
  kPassed,
};

inline constexpr Reason kRejectReasons[] = {
    Reason::kNoAsr, Reason::kTooLong, Reason::kGamingCategory,
    Reason::kTooFewObjects, Reason::kStaticVisuals};

std::string_view reason_name(Reason r);

class FilterDecision {
 public:
  static FilterDecision accept() { return FilterDecision(Reason::kPassed); }
  static FilterDecision reject(Reason r);

  bool accepted() const { return reason_ == Reason::kPassed; }
  Reason reason() const { return reason_; }
  bool operator==(const FilterDecision&) const = default;

 private:
  explicit FilterDecision(Reason r) : reason_(r) {}
  Reason reason_;
};

struct Metadata {
  bool has_english_asr = false;
  Millis duration;
  std::string category;
};

Metadata metadata_of(const corpus::VideoRecord& record);

struct MetadataGateConfig {
  Millis max_duration{1'200'000};  // 20 minutes; longer videos are dropped
  std::vector<std::string> excluded_categories{"Gaming"};
};

// Gates in fixed order: missing English ASR, duration above the maximum,
// excluded category (case-insensitive).
FilterDecision metadata_gate(const Metadata& meta,
                             const MetadataGateConfig& cfg = {});

struct ThumbnailEvidence {
  Matrix object_probs;  // kThumbnails x classes
  Matrix features;      // kThumbnails x feature dim
};

struct ThumbnailGateConfig {
  double prob_threshold = 0.30;
  std::size_t min_objects = 4;
  double sim_threshold = 0.9;
  // Count distinct classes present in any thumbnail instead of
  // (thumbnail, class) cells.
  bool distinct_classes = false;
};

// Number of present objects under the configured counting rule.
std::size_t count_present_objects(const ThumbnailEvidence& ev,
                                  const ThumbnailGateConfig& cfg);

// Mean cosine similarity over all unordered pairs of feature rows.
// Throws Error(kZeroVector) for a zero-norm row.
double mean_pairwise_cosine(const Matrix& features);

// Rejects too_few_objects when fewer than min_objects are present
// (probability >= prob_threshold), else static_visuals when the mean
// pairwise cosine similarity exceeds sim_threshold.
FilterDecision thumbnail_gate(const ThumbnailEvidence& ev,
                              const ThumbnailGateConfig& cfg = {});

}  // namespace vidscript::filter

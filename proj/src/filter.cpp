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

#include "vidscript/filter.hpp"

#include <cmath>

#include "vidscript/text.hpp"

namespace vidscript::filter {

std::string_view reason_name(Reason r) {
  switch (r) {
    case Reason::kNoAsr: return "no_asr";
    case Reason::kTooLong: return "too_long";
    case Reason::kGamingCategory: return "gaming_category";
    case Reason::kTooFewObjects: return "too_few_objects";
    case Reason::kStaticVisuals: return "static_visuals";
    case Reason::kPassed: return "passed";
  }
  return "unknown";
}

FilterDecision FilterDecision::reject(Reason r) {
  if (r == Reason::kPassed) {
    throw Error(ErrorKind::kInvalidArgument, "reject() needs a failure reason");
  }
  return FilterDecision(r);
}

Metadata metadata_of(const corpus::VideoRecord& record) {
  return Metadata{record.has_english_asr, record.duration, record.category};
}

FilterDecision metadata_gate(const Metadata& meta,
                             const MetadataGateConfig& cfg) {
  if (!meta.has_english_asr) return FilterDecision::reject(Reason::kNoAsr);
  if (meta.duration > cfg.max_duration) {
    return FilterDecision::reject(Reason::kTooLong);
  }
  const std::string category = text::to_lower(meta.category);
  for (const std::string& excluded : cfg.excluded_categories) {
    if (category == text::to_lower(excluded)) {
      return FilterDecision::reject(Reason::kGamingCategory);
    }
  }
  return FilterDecision::accept();
}

namespace {

void check_evidence(const ThumbnailEvidence& ev) {
  if (ev.object_probs.rows() != kThumbnails || ev.features.rows() != kThumbnails) {
    throw Error(ErrorKind::kShapeMismatch,
                "thumbnail evidence needs exactly 4 rows per matrix");
  }
  for (double p : ev.object_probs.data()) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw Error(ErrorKind::kOutOfRange, "object probability outside [0, 1]");
    }
  }
  if (!ev.features.all_finite()) {
    throw Error(ErrorKind::kNonFinite, "non-finite thumbnail feature");
  }
}

}  // namespace

std::size_t count_present_objects(const ThumbnailEvidence& ev,
                                  const ThumbnailGateConfig& cfg) {
  const Matrix& p = ev.object_probs;
  std::size_t count = 0;
  if (cfg.distinct_classes) {
    for (std::size_t c = 0; c < p.cols(); ++c) {
      for (std::size_t r = 0; r < p.rows(); ++r) {
        if (p(r, c) >= cfg.prob_threshold) {
          ++count;
          break;
        }
      }
    }
  } else {
    for (double v : p.data()) {
      if (v >= cfg.prob_threshold) ++count;
    }
  }
  return count;
}

double mean_pairwise_cosine(const Matrix& features) {
  const std::size_t n = features.rows();
  std::vector<double> norms(n);
  for (std::size_t r = 0; r < n; ++r) {
    norms[r] = l2_norm(features.row(r));
    if (norms[r] == 0.0) {
      throw Error(ErrorKind::kZeroVector,
                  "feature row " + std::to_string(r) + " has zero norm");
    }
  }
  double sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      sum += dot(features.row(a), features.row(b)) / (norms[a] * norms[b]);
      ++pairs;
    }
  }
  return pairs ? sum / static_cast<double>(pairs) : 0.0;
}

FilterDecision thumbnail_gate(const ThumbnailEvidence& ev,
                              const ThumbnailGateConfig& cfg) {
  check_evidence(ev);
  if (count_present_objects(ev, cfg) < cfg.min_objects) {
    return FilterDecision::reject(Reason::kTooFewObjects);
  }
  if (mean_pairwise_cosine(ev.features) > cfg.sim_threshold) {
    return FilterDecision::reject(Reason::kStaticVisuals);
  }
  return FilterDecision::accept();
}

}  // namespace vidscript::filter

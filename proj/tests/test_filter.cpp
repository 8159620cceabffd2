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

#include <cmath>

#include "vidscript/filter.hpp"

using namespace vidscript;
using namespace vidscript::filter;

namespace {

Metadata meta(bool asr, double seconds, std::string category) {
  return Metadata{asr, Millis::from_seconds(seconds), std::move(category)};
}

ThumbnailEvidence evidence(std::size_t present, double prob, Matrix features) {
  Matrix p(4, 10, 0.0);
  for (std::size_t k = 0; k < present; ++k) p(k % 4, k / 4) = prob;
  return {p, std::move(features)};
}

Matrix identity_rows() { return Matrix{{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}; }

// Straight-line restatement of the retention rules.
Reason reference(const ThumbnailEvidence& ev, double pt, std::size_t min_obj, double st) {
  std::size_t count = 0;
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t c = 0; c < ev.object_probs.cols(); ++c) count += ev.object_probs(r, c) >= pt;
  }
  if (count < min_obj) return Reason::kTooFewObjects;
  double sum = 0;
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = a + 1; b < 4; ++b) {
      double d = 0, na = 0, nb = 0;
      for (std::size_t k = 0; k < ev.features.cols(); ++k) {
        d += ev.features(a, k) * ev.features(b, k);
        na += ev.features(a, k) * ev.features(a, k);
        nb += ev.features(b, k) * ev.features(b, k);
      }
      sum += d / std::sqrt(na * nb);
    }
  }
  return sum / 6 > st ? Reason::kStaticVisuals : Reason::kPassed;
}

}  // namespace

TEST_CASE("metadata gate examples") {
  CHECK(metadata_gate(meta(true, 600, "Science")).accepted());
  CHECK(metadata_gate(meta(true, 1201, "Science")).reason() == Reason::kTooLong);
  CHECK(metadata_gate(meta(false, 1201, "Gaming")).reason() == Reason::kNoAsr);
  CHECK(metadata_gate(meta(true, 1200, "Science")).accepted());  // 20 minutes exactly
  CHECK(metadata_gate(meta(true, 1201, "Gaming")).reason() == Reason::kTooLong);
  CHECK(metadata_gate(meta(true, 60, "gAmInG")).reason() == Reason::kGamingCategory);
  CHECK(metadata_gate(meta(true, 60, "Gaming News")).accepted());
}

TEST_CASE("accept iff reason is passed") {
  CHECK(FilterDecision::accept().accepted());
  CHECK(FilterDecision::accept().reason() == Reason::kPassed);
  for (Reason r : kRejectReasons) {
    CHECK_FALSE(FilterDecision::reject(r).accepted());
  }
  CHECK_THROWS_AS(FilterDecision::reject(Reason::kPassed), Error);
  CHECK(reason_name(Reason::kStaticVisuals) == "static_visuals");
}

TEST_CASE("thumbnail gate examples") {
  CHECK(thumbnail_gate(evidence(0, 0.0, identity_rows())).reason() ==
        Reason::kTooFewObjects);
  Matrix same{{1, 0}, {1, 0}, {1, 0}, {1, 0}};
  CHECK(thumbnail_gate(evidence(4, 0.30, same)).reason() == Reason::kStaticVisuals);
  CHECK(thumbnail_gate(evidence(5, 0.31, identity_rows())).accepted());
  CHECK(thumbnail_gate(evidence(3, 0.99, identity_rows())).reason() ==
        Reason::kTooFewObjects);
}

TEST_CASE("distinct-class counting") {
  Matrix p(4, 3, 0.0);
  for (std::size_t r = 0; r < 4; ++r) p(r, 0) = 0.9;  // one class in all four frames
  ThumbnailEvidence ev{p, identity_rows()};
  ThumbnailGateConfig cells, classes;
  classes.distinct_classes = true;
  CHECK(count_present_objects(ev, cells) == 4);
  CHECK(count_present_objects(ev, classes) == 1);
  CHECK(thumbnail_gate(ev, cells).accepted());
  CHECK(thumbnail_gate(ev, classes).reason() == Reason::kTooFewObjects);
}

TEST_CASE("malformed evidence") {
  Matrix zero_row{{1, 0}, {0, 0}, {0, 1}, {1, 1}};
  try {
    thumbnail_gate(evidence(8, 0.5, zero_row));
    FAIL("expected error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kZeroVector);
  }
  CHECK_THROWS_AS(thumbnail_gate({Matrix(3, 2, 0.5), Matrix(3, 2, 1.0)}), Error);
  CHECK_THROWS_AS(thumbnail_gate(evidence(4, 1.5, identity_rows())), Error);
}

TEST_CASE("gate agrees with straight-line reference and its properties") {
  Rng rng(17);
  for (int t = 0; t < 2000; ++t) {
    ThumbnailEvidence ev{Matrix(4, 1 + rng.index(4)), Matrix(4, 1 + rng.index(4))};
    for (double& p : ev.object_probs.data()) p = std::round(rng.uniform01() * 10) / 10;
    for (double& f : ev.features.data()) f = rng.uniform01() + 0.01;
    ThumbnailGateConfig cfg;
    cfg.min_objects = rng.index(6);
    cfg.sim_threshold = rng.uniform01();
    const Reason got = thumbnail_gate(ev, cfg).reason();
    CHECK(got == reference(ev, cfg.prob_threshold, cfg.min_objects, cfg.sim_threshold));

    // Positive row rescaling leaves cosine similarity alone.
    ThumbnailEvidence scaled = ev;
    for (std::size_t r = 0; r < 4; ++r) {
      const double s = 0.1 + 10 * rng.uniform01();
      for (double& f : scaled.features.row(r)) f *= s;
    }
    CHECK(std::abs(mean_pairwise_cosine(scaled.features) -
                   mean_pairwise_cosine(ev.features)) < 1e-12);

    // Raising a probability never creates a too-few-objects rejection.
    ThumbnailEvidence raised = ev;
    double& cell = raised.object_probs.data()[rng.index(raised.object_probs.data().size())];
    cell = std::min(1.0, cell + rng.uniform01());
    if (got != Reason::kTooFewObjects) {
      CHECK(thumbnail_gate(raised, cfg).reason() != Reason::kTooFewObjects);
    }
  }
}

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

// Timed tokens -> fixed-budget segments -> fixed-size packed examples, plus
// the sequence length arithmetic that follows from the input resolution.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "vidscript/corpus.hpp"

namespace vidscript::segmenter {

// Greedy packing of whole words into segments of at most `max_tokens`
// tokens: a word that would overflow the current segment starts a new one.
// Each segment's frame time is the midpoint of its span. Tokens of one
// word must be contiguous. Throws Error(kOversizeWord) if a single word
// has more than `max_tokens` tokens.
std::vector<corpus::Segment> segment_transcript(
    std::span<const corpus::TimedToken> tokens,
    std::size_t max_tokens = corpus::kDefaultTokensPerSegment,
    corpus::Variant variant = corpus::Variant::kNoisy);

struct FrameRequest {
  std::string video_id;
  Millis frame_time;
};

// One (video, timestamp) entry per segment, for an external frame extractor.
std::vector<FrameRequest> frame_manifest(const corpus::VideoRecord& record);

// Streaming packer. Segments are concatenated across videos in arrival order
// and emitted in blocks of exactly `segments_per_example`; nothing is ever
// padded. Drive a packer from a single thread.
class SegmentPacker {
 public:
  explicit SegmentPacker(
      std::size_t segments_per_example = corpus::kDefaultSegmentsPerExample,
      bool cross_video = true);

  // Returns the examples completed by this video.
  std::vector<corpus::PackedExample> push(const corpus::VideoRecord& video);
  // Drops the trailing partial example; returns how many segments that was.
  std::size_t finish();

  std::size_t segments_in() const { return segments_in_; }
  std::size_t examples_out() const { return examples_out_; }
  std::size_t dropped() const { return dropped_; }

 private:
  std::size_t drop_pending();

  std::size_t per_example_;
  bool cross_video_;
  corpus::PackedExample pending_;
  std::size_t segments_in_ = 0;
  std::size_t examples_out_ = 0;
  std::size_t dropped_ = 0;
};

struct PackResult {
  std::vector<corpus::PackedExample> examples;
  std::size_t dropped = 0;
};

PackResult pack_examples(
    std::span<const corpus::VideoRecord> videos,
    std::size_t segments_per_example = corpus::kDefaultSegmentsPerExample,
    bool cross_video = true);

struct ShapeConfig {
  std::size_t image_width = 192;
  std::size_t image_height = 352;
  std::size_t patch = 16;
  std::size_t pool = 2;
  std::size_t group_segments = 4;
  std::size_t tokens_per_segment = 32;
  std::size_t segments_per_example = 16;
};

struct SequenceShape {
  std::size_t cells_per_frame = 0;
  std::size_t visual_tokens_per_frame = 0;  // cells + one CLS
  std::size_t joint_sequence_length = 0;
  std::size_t language_only_length = 0;

  bool operator==(const SequenceShape&) const = default;
};

// Throws Error(kDivisibility) when width or height is not a multiple of
// patch * pool, and Error(kInvalidArgument) for zero sizes.
SequenceShape sequence_shape(const ShapeConfig& cfg = {});

// Consecutive, non-overlapping groups of `group` segments.
// Throws Error(kDivisibility) when the segment count is not a multiple.
std::vector<std::span<const corpus::Segment>> group_for_joint(
    const corpus::PackedExample& example, std::size_t group = 4);

}  // namespace vidscript::segmenter

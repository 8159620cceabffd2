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

#include "vidscript/segmenter.hpp"

#include <sstream>

namespace vidscript::segmenter {

using corpus::Segment;
using corpus::TimedToken;

namespace {

Segment close_segment(std::vector<TimedToken> tokens, corpus::Variant variant) {
  Segment s;
  s.tokens = std::move(tokens);
  s.variant = variant;
  s.frame_time = Millis{(s.start().count + s.end().count) / 2};
  return s;
}

}  // namespace

std::vector<Segment> segment_transcript(std::span<const TimedToken> tokens,
                                        std::size_t max_tokens,
                                        corpus::Variant variant) {
  if (max_tokens == 0) {
    throw Error(ErrorKind::kInvalidArgument, "segment budget must be positive");
  }
  std::vector<Segment> out;
  std::vector<TimedToken> current;
  std::size_t k = 0;
  while (k < tokens.size()) {
    std::size_t end = k + 1;
    while (end < tokens.size() &&
           tokens[end].word_index == tokens[k].word_index) {
      ++end;
    }
    const std::size_t word_len = end - k;
    if (word_len > max_tokens) {
      std::ostringstream os;
      os << "word " << tokens[k].word_index << " has " << word_len
         << " tokens, more than the segment budget of " << max_tokens;
      throw Error(ErrorKind::kOversizeWord, os.str());
    }
    if (current.size() + word_len > max_tokens) {
      out.push_back(close_segment(std::move(current), variant));
      current.clear();
    }
    current.insert(current.end(), tokens.begin() + k, tokens.begin() + end);
    k = end;
  }
  if (!current.empty()) out.push_back(close_segment(std::move(current), variant));
  return out;
}

std::vector<FrameRequest> frame_manifest(const corpus::VideoRecord& record) {
  std::vector<FrameRequest> out;
  out.reserve(record.segments.size());
  for (const Segment& s : record.segments) {
    out.push_back(FrameRequest{record.video_id, s.frame_time});
  }
  return out;
}

SegmentPacker::SegmentPacker(std::size_t segments_per_example, bool cross_video)
    : per_example_(segments_per_example), cross_video_(cross_video) {
  if (per_example_ == 0) {
    throw Error(ErrorKind::kInvalidArgument,
                "segments per example must be positive");
  }
}

std::vector<corpus::PackedExample> SegmentPacker::push(
    const corpus::VideoRecord& video) {
  if (!cross_video_) drop_pending();
  std::vector<corpus::PackedExample> done;
  for (std::size_t i = 0; i < video.segments.size(); ++i) {
    pending_.segments.push_back(video.segments[i]);
    pending_.provenance.push_back(corpus::SegmentRef{video.video_id, i});
    ++segments_in_;
    if (pending_.segments.size() == per_example_) {
      done.push_back(std::move(pending_));
      pending_ = {};
      ++examples_out_;
    }
  }
  return done;
}

std::size_t SegmentPacker::drop_pending() {
  const std::size_t n = pending_.segments.size();
  dropped_ += n;
  pending_ = {};
  return n;
}

std::size_t SegmentPacker::finish() { return drop_pending(); }

PackResult pack_examples(std::span<const corpus::VideoRecord> videos,
                         std::size_t segments_per_example, bool cross_video) {
  SegmentPacker packer(segments_per_example, cross_video);
  PackResult result;
  for (const corpus::VideoRecord& v : videos) {
    for (auto& e : packer.push(v)) result.examples.push_back(std::move(e));
  }
  packer.finish();
  result.dropped = packer.dropped();
  return result;
}

SequenceShape sequence_shape(const ShapeConfig& cfg) {
  if (cfg.image_width == 0 || cfg.image_height == 0 || cfg.patch == 0 ||
      cfg.pool == 0 || cfg.group_segments == 0 || cfg.tokens_per_segment == 0 ||
      cfg.segments_per_example == 0) {
    throw Error(ErrorKind::kInvalidArgument, "shape parameters must be positive");
  }
  const std::size_t stride = cfg.patch * cfg.pool;
  if (cfg.image_width % stride != 0 || cfg.image_height % stride != 0) {
    std::ostringstream os;
    os << "image " << cfg.image_width << "x" << cfg.image_height
       << " is not divisible by patch*pool = " << stride;
    throw Error(ErrorKind::kDivisibility, os.str());
  }
  SequenceShape s;
  s.cells_per_frame = (cfg.image_width / stride) * (cfg.image_height / stride);
  s.visual_tokens_per_frame = s.cells_per_frame + 1;
  s.joint_sequence_length =
      cfg.group_segments * (s.visual_tokens_per_frame + cfg.tokens_per_segment);
  s.language_only_length = cfg.segments_per_example * cfg.tokens_per_segment;
  return s;
}

std::vector<std::span<const Segment>> group_for_joint(
    const corpus::PackedExample& example, std::size_t group) {
  const std::size_t n = example.segments.size();
  if (group == 0 || n % group != 0) {
    std::ostringstream os;
    os << n << " segments cannot be split into groups of " << group;
    throw Error(ErrorKind::kDivisibility, os.str());
  }
  std::vector<std::span<const Segment>> out;
  for (std::size_t k = 0; k < n; k += group) {
    out.emplace_back(example.segments.data() + k, group);
  }
  return out;
}

}  // namespace vidscript::segmenter

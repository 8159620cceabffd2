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

// Shared data model: timed transcript words, BPE tokens carrying word
// timing, fixed-budget segments, per-video records and packed examples.

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "vidscript/common.hpp"

namespace vidscript::corpus {

inline constexpr int kSchemaVersion = 1;
inline constexpr std::size_t kDefaultTokensPerSegment = 32;
inline constexpr std::size_t kDefaultSegmentsPerExample = 16;

struct TimedWord {
  std::string text;
  Millis start;
  Millis end;

  bool operator==(const TimedWord&) const = default;
};

struct TimedToken {
  std::int32_t token_id = 0;
  std::size_t word_index = 0;  // index into the source word list
  Millis start;
  Millis end;

  bool operator==(const TimedToken&) const = default;
};

enum class Variant { kClean, kNoisy };

std::string_view variant_name(Variant v);
Variant parse_variant(std::string_view name);

struct Segment {
  std::vector<TimedToken> tokens;
  Millis frame_time;
  Variant variant = Variant::kNoisy;

  // Both require a non-empty segment.
  Millis start() const { return tokens.front().start; }
  Millis end() const { return tokens.back().end; }

  bool operator==(const Segment&) const = default;
};

struct VideoRecord {
  std::string video_id;
  Millis duration;
  std::string category;
  bool has_english_asr = false;
  std::vector<Segment> segments;

  bool operator==(const VideoRecord&) const = default;
};

struct SegmentRef {
  std::string video_id;
  std::size_t segment_index = 0;

  bool operator==(const SegmentRef&) const = default;
};

struct PackedExample {
  std::vector<Segment> segments;
  std::vector<SegmentRef> provenance;  // one entry per segment slot

  bool operator==(const PackedExample&) const = default;
};

struct Violation {
  std::string field;      // e.g. "segments[3].tokens"
  std::string invariant;  // short machine-readable tag
  std::string message;
};

// Checks every invariant of the record and its segments. Violations are
// returned as data; an empty result means the record is well formed.
std::vector<Violation> validate_record(
    const VideoRecord& record,
    std::size_t max_tokens_per_segment = kDefaultTokensPerSegment);

// Word-list invariants: non-empty text, start <= end, sorted by start and
// non-overlapping up to ties.
std::vector<Violation> validate_transcript(std::span<const TimedWord> words);

std::vector<Violation> validate_example(
    const PackedExample& example,
    std::size_t segments_per_example = kDefaultSegmentsPerExample,
    std::size_t max_tokens_per_segment = kDefaultTokensPerSegment);

// JSON mapping. Field names follow the line-delimited record schema:
// video_id, duration_s, category, has_english_asr,
// segments[{tokens[{id, word_index, start_s, end_s}], frame_time_s, variant}].
// Parsers throw Error(kParse) on malformed input.
nlohmann::json to_json(const TimedWord& w);
nlohmann::json to_json(const Segment& s);
nlohmann::json to_json(const VideoRecord& r);
nlohmann::json to_json(const PackedExample& e);

TimedWord timed_word_from_json(const nlohmann::json& j);
Segment segment_from_json(const nlohmann::json& j);
VideoRecord video_record_from_json(const nlohmann::json& j);
PackedExample packed_example_from_json(const nlohmann::json& j);

// Rejects records whose schema_version is present and unsupported.
void check_schema_version(const nlohmann::json& j);

double seconds_field(const nlohmann::json& j, const char* key);

}  // namespace vidscript::corpus

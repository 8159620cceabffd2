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

#include "vidscript/corpus.hpp"

#include <sstream>

namespace vidscript::corpus {

using nlohmann::json;

std::string_view variant_name(Variant v) {
  return v == Variant::kClean ? "clean" : "noisy";
}

Variant parse_variant(std::string_view name) {
  if (name == "clean") return Variant::kClean;
  if (name == "noisy") return Variant::kNoisy;
  throw Error(ErrorKind::kParse,
              "unknown segment variant '" + std::string(name) + "'");
}

namespace {

std::string seg_field(std::size_t i, const char* sub = nullptr) {
  std::ostringstream os;
  os << "segments[" << i << "]";
  if (sub) os << "." << sub;
  return os.str();
}

void check_segment(const Segment& s, std::size_t idx, std::size_t max_tokens,
                   std::vector<Violation>& out) {
  if (s.tokens.empty()) {
    out.push_back({seg_field(idx, "tokens"), "non_empty",
                   "segment has no tokens"});
    return;
  }
  if (s.tokens.size() > max_tokens) {
    std::ostringstream os;
    os << "segment has " << s.tokens.size() << " tokens, bound is L="
       << max_tokens;
    out.push_back({seg_field(idx, "tokens"), "max_tokens", os.str()});
  }
  bool bad_span = false, bad_order = false, bad_word = false, bad_id = false;
  for (std::size_t k = 0; k < s.tokens.size(); ++k) {
    const TimedToken& t = s.tokens[k];
    if (t.token_id < 0) bad_id = true;
    if (t.start > t.end) bad_span = true;
    if (k == 0) continue;
    const TimedToken& p = s.tokens[k - 1];
    if (t.word_index < p.word_index || t.start < p.start) bad_order = true;
    if (t.word_index == p.word_index &&
        (t.start != p.start || t.end != p.end)) {
      bad_word = true;
    }
  }
  if (bad_id) {
    out.push_back({seg_field(idx, "tokens"), "token_id_non_negative",
                   "negative token id"});
  }
  if (bad_span) {
    out.push_back({seg_field(idx, "tokens"), "token_start_le_end",
                   "token start after end"});
  }
  if (bad_order) {
    out.push_back({seg_field(idx, "tokens"), "token_order",
                   "tokens not in word/time order"});
  }
  if (bad_word) {
    out.push_back({seg_field(idx, "tokens"), "word_shared_span",
                   "tokens of one word carry different time spans"});
  }
  if (s.frame_time < s.start() || s.frame_time > s.end()) {
    out.push_back({seg_field(idx, "frame_time"), "frame_within_segment",
                   "frame time outside [start, end]"});
  }
}

}  // namespace

std::vector<Violation> validate_record(const VideoRecord& record,
                                       std::size_t max_tokens_per_segment) {
  std::vector<Violation> out;
  if (record.duration.count < 0) {
    out.push_back({"duration", "non_negative", "negative duration"});
  }
  for (std::size_t i = 0; i < record.segments.size(); ++i) {
    check_segment(record.segments[i], i, max_tokens_per_segment, out);
  }
  for (std::size_t i = 1; i < record.segments.size(); ++i) {
    const Segment& prev = record.segments[i - 1];
    const Segment& cur = record.segments[i];
    if (prev.tokens.empty() || cur.tokens.empty()) continue;
    if (cur.start() < prev.end()) {
      std::ostringstream os;
      os << "segment " << i << " starts at " << cur.start().seconds()
         << " s, before segment " << i - 1 << " ends ("
         << prev.end().seconds() << " s)";
      out.push_back({seg_field(i, "start"), "segment_order", os.str()});
    }
  }
  return out;
}

std::vector<Violation> validate_transcript(std::span<const TimedWord> words) {
  std::vector<Violation> out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    const std::string f = "words[" + std::to_string(i) + "]";
    if (words[i].text.empty()) {
      out.push_back({f + ".text", "non_empty", "empty word"});
    }
    if (words[i].start > words[i].end) {
      out.push_back({f, "start_le_end", "word start after end"});
    }
    if (i > 0 && words[i].start < words[i - 1].end) {
      out.push_back({f + ".start", "word_order",
                     "word overlaps or precedes its predecessor"});
    }
  }
  return out;
}

std::vector<Violation> validate_example(const PackedExample& example,
                                        std::size_t segments_per_example,
                                        std::size_t max_tokens_per_segment) {
  std::vector<Violation> out;
  if (example.segments.size() != segments_per_example) {
    out.push_back({"segments", "exact_count",
                   "example has " + std::to_string(example.segments.size()) +
                       " segments, expected " +
                       std::to_string(segments_per_example)});
  }
  if (example.provenance.size() != example.segments.size()) {
    out.push_back({"provenance", "one_per_slot",
                   "provenance length differs from segment count"});
  }
  for (std::size_t i = 0; i < example.segments.size(); ++i) {
    check_segment(example.segments[i], i, max_tokens_per_segment, out);
  }
  const std::size_t n =
      std::min(example.provenance.size(), example.segments.size());
  for (std::size_t i = 1; i < n; ++i) {
    const SegmentRef& a = example.provenance[i - 1];
    const SegmentRef& b = example.provenance[i];
    if (a.video_id == b.video_id && b.segment_index <= a.segment_index) {
      out.push_back({"provenance[" + std::to_string(i) + "]",
                     "video_order", "segments of one video out of order"});
    }
  }
  return out;
}

// JSON -------------------------------------------------------------------

void check_schema_version(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::kParse, "record is not an object");
  auto it = j.find("schema_version");
  if (it == j.end()) return;
  if (!it->is_number_integer() || it->get<int>() != kSchemaVersion) {
    throw Error(ErrorKind::kParse, "unsupported schema_version " + it->dump());
  }
}

double seconds_field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_number()) {
    throw Error(ErrorKind::kParse, std::string("missing numeric field ") + key);
  }
  return it->get<double>();
}

namespace {

template <typename T>
T required(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw Error(ErrorKind::kParse, std::string("missing field ") + key);
  }
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("bad field ") + key + ": " +
                                       e.what());
  }
}

Millis ms_field(const json& j, const char* key) {
  return Millis::from_seconds(seconds_field(j, key));
}

const json& required_array(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_array()) {
    throw Error(ErrorKind::kParse, std::string("missing array field ") + key);
  }
  return *it;
}

}  // namespace

json to_json(const TimedWord& w) {
  return json{{"text", w.text},
              {"start_s", w.start.seconds()},
              {"end_s", w.end.seconds()}};
}

json to_json(const Segment& s) {
  json tokens = json::array();
  for (const TimedToken& t : s.tokens) {
    tokens.push_back(json{{"id", t.token_id},
                          {"word_index", t.word_index},
                          {"start_s", t.start.seconds()},
                          {"end_s", t.end.seconds()}});
  }
  return json{{"tokens", std::move(tokens)},
              {"frame_time_s", s.frame_time.seconds()},
              {"variant", variant_name(s.variant)}};
}

json to_json(const VideoRecord& r) {
  json segs = json::array();
  for (const Segment& s : r.segments) segs.push_back(to_json(s));
  return json{{"schema_version", kSchemaVersion},
              {"video_id", r.video_id},
              {"duration_s", r.duration.seconds()},
              {"category", r.category},
              {"has_english_asr", r.has_english_asr},
              {"segments", std::move(segs)}};
}

json to_json(const PackedExample& e) {
  json segs = json::array();
  for (const Segment& s : e.segments) segs.push_back(to_json(s));
  json prov = json::array();
  for (const SegmentRef& p : e.provenance) {
    prov.push_back(json{{"video_id", p.video_id},
                        {"segment_index", p.segment_index}});
  }
  return json{{"schema_version", kSchemaVersion},
              {"segments", std::move(segs)},
              {"provenance", std::move(prov)}};
}

TimedWord timed_word_from_json(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::kParse, "word is not an object");
  return TimedWord{required<std::string>(j, "text"), ms_field(j, "start_s"),
                   ms_field(j, "end_s")};
}

Segment segment_from_json(const json& j) {
  if (!j.is_object()) {
    throw Error(ErrorKind::kParse, "segment is not an object");
  }
  Segment s;
  for (const json& t : required_array(j, "tokens")) {
    s.tokens.push_back(TimedToken{required<std::int32_t>(t, "id"),
                                  required<std::size_t>(t, "word_index"),
                                  ms_field(t, "start_s"),
                                  ms_field(t, "end_s")});
  }
  s.frame_time = ms_field(j, "frame_time_s");
  s.variant = parse_variant(required<std::string>(j, "variant"));
  return s;
}

VideoRecord video_record_from_json(const json& j) {
  check_schema_version(j);
  VideoRecord r;
  r.video_id = required<std::string>(j, "video_id");
  r.duration = ms_field(j, "duration_s");
  r.category = required<std::string>(j, "category");
  r.has_english_asr = required<bool>(j, "has_english_asr");
  auto it = j.find("segments");
  if (it != j.end()) {
    if (!it->is_array()) {
      throw Error(ErrorKind::kParse, "segments not an array");
    }
    for (const json& s : *it) r.segments.push_back(segment_from_json(s));
  }
  return r;
}

PackedExample packed_example_from_json(const json& j) {
  check_schema_version(j);
  PackedExample e;
  for (const json& s : required_array(j, "segments")) {
    e.segments.push_back(segment_from_json(s));
  }
  for (const json& p : required_array(j, "provenance")) {
    e.provenance.push_back(SegmentRef{required<std::string>(p, "video_id"),
                                      required<std::size_t>(p, "segment_index")});
  }
  return e;
}

}  // namespace vidscript::corpus

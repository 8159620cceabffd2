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

// End-to-end corpus preparation: raw video records in, packed examples out.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "vidscript/corpus.hpp"
#include "vidscript/denoise.hpp"
#include "vidscript/filter.hpp"
#include "vidscript/masking.hpp"
#include "vidscript/segmenter.hpp"
#include "vidscript/tokenizer.hpp"

namespace vidscript::pipeline {

struct PipelineConfig {
  // GPT-2 resources; both empty selects the built-in byte-level vocabulary.
  std::string encoder_json;
  std::string merges_bpe;

  std::size_t tokens_per_segment = corpus::kDefaultTokensPerSegment;
  std::size_t segments_per_example = corpus::kDefaultSegmentsPerExample;
  bool cross_video = true;

  filter::MetadataGateConfig metadata;
  filter::ThumbnailGateConfig thumbnails;
  double perplexity_threshold = denoise::kDefaultPerplexityThreshold;

  denoise::CorruptionConfig corruption;
  masking::MaskConfig mask;
  double temperature = 0.05;
  double contrastive_coeff = 0.25;
  segmenter::ShapeConfig shape;

  std::uint64_t seed = 0;

  // Throws Error(kInvalidArgument) naming the first bad field.
  void validate() const;
  nlohmann::json to_json() const;
  // Overlays the keys present in `j` onto `base`. Unknown keys are errors.
  static PipelineConfig from_json(const nlohmann::json& j,
                                  PipelineConfig base);
  static PipelineConfig from_json(const nlohmann::json& j);
  // FNV-1a of the canonical JSON dump.
  std::uint64_t hash() const;

  Tokenizer make_tokenizer() const;
};

// One input line of `run`. Words carry the noisy ASR timing; clean_words,
// when present, is the denoised rewrite whose timing is transferred by
// alignment. Thumbnail evidence and per-group perplexities are optional and
// their gates are skipped when absent.
struct RawVideo {
  std::string video_id;
  Millis duration;
  std::string category;
  bool has_english_asr = false;
  std::optional<filter::ThumbnailEvidence> thumbnails;
  std::vector<corpus::TimedWord> words;
  std::optional<std::vector<std::string>> clean_words;
  std::vector<double> group_perplexities;
};

RawVideo raw_video_from_json(const nlohmann::json& j);
nlohmann::json to_json(const RawVideo& v);

struct Manifest {
  std::size_t lines = 0;         // non-blank input lines
  std::size_t parse_errors = 0;  // lines that never became records
  std::size_t inputs = 0;        // parsed records
  std::size_t accepted = 0;
  std::map<std::string, std::size_t> rejected;  // by reason, all reasons listed
  std::size_t segments = 0;
  std::size_t examples = 0;
  std::size_t dropped_remainder = 0;
  std::uint64_t config_hash = 0;
  nlohmann::json effective_config;

  std::size_t rejected_total() const;
  nlohmann::json to_json() const;
};

// Rejection reasons beyond the filter gates.
inline constexpr const char* kHighPerplexity = "high_perplexity";
inline constexpr const char* kUnsegmentable = "unsegmentable";

struct RunResult {
  Manifest manifest;
  std::vector<std::string> errors;  // "line N: message", in input order
};

// Reads line-delimited RawVideo records from `in`, writes one packed example
// per line to `out`. Per-record work runs on `jobs` threads; output order
// never depends on `jobs`. Stream failures throw Error(kIo).
RunResult run_pipeline(const PipelineConfig& config, std::istream& in,
                       std::ostream& out, std::size_t jobs = 1);

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SelfcheckOptions {
  segmenter::ShapeConfig shape;
  double temperature = 0.05;
  std::uint64_t seed = 0;
};

std::vector<CheckResult> selfcheck(const SelfcheckOptions& opts = {});

}  // namespace vidscript::pipeline

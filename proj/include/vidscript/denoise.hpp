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

// Synthetic ASR-style corruption of clean text (training pairs for a
// transcript denoiser) and the perplexity gate applied to denoised output.

#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vidscript/tokenizer.hpp"

namespace vidscript::denoise {

struct CorruptionConfig {
  double replace_prob = 0.01;
  double homophone_share = 0.25;  // of replacements
  double filler_prob = 0.01;
  std::vector<std::string> filler_lexicon{"umm", "hmm", "yeah"};
  std::uint64_t rng_seed = 0;

  // Throws Error(kInvalidArgument) on a probability outside [0, 1] or an
  // empty filler lexicon while filler_prob > 0.
  void validate() const;
};

// Words sharing a pronunciation. Symmetric by construction.
class PronunciationTable {
 public:
  // CMU Pronouncing Dictionary text format: "WORD  PH1 PH2 ...", alternate
  // pronunciations as "WORD(2)", comment lines starting with ";;;".
  static PronunciationTable load_cmudict(const std::filesystem::path& path);
  static PronunciationTable parse_cmudict(std::istream& in);

  void add(std::string_view word, std::string_view pronunciation);
  // Other words with an identical pronunciation, sorted; empty if none.
  std::span<const std::string> homophones(const std::string& word) const;
  bool is_symmetric() const;
  std::size_t word_count() const { return homophones_.size(); }

 private:
  void rebuild(const std::string& pronunciation);

  std::map<std::string, std::vector<std::string>> words_by_pron_;
  std::map<std::string, std::vector<std::string>> prons_by_word_;
  std::map<std::string, std::vector<std::string>> homophones_;
};

struct CorruptedDocument {
  std::vector<std::string> words;
  std::size_t replacements = 0;
  std::size_t homophone_replacements = 0;
  std::size_t fillers = 0;
};

// Lowercases, strips punctuation and applies random replacements and
// filler insertions. Words that are pure punctuation normalize to nothing
// and are dropped; every other input word yields exactly one output word.
// Draws per word, in order: filler?, filler choice, replace?, homophone?,
// replacement choice. Deterministic for a given cfg.rng_seed.
CorruptedDocument corrupt_document(std::span<const std::string> clean,
                                   const CorruptionConfig& cfg,
                                   const PronunciationTable& table,
                                   const Tokenizer& tokenizer);

struct GateDecision {
  bool accept = true;
  std::optional<std::size_t> offending_group;  // set on reject

  bool operator==(const GateDecision&) const = default;
};

inline constexpr double kDefaultPerplexityThreshold = 200.0;

// Rejects when any group's perplexity exceeds the threshold (strictly).
GateDecision perplexity_gate(std::span<const double> per_group_perplexities,
                             double threshold = kDefaultPerplexityThreshold);

}  // namespace vidscript::denoise

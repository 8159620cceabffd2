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

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "vidscript/corpus.hpp"

namespace vidscript {

using TokenId = std::int32_t;

// Byte-level BPE tokenizer in the GPT-2 style.
//
// Two constructions are available: the published GPT-2 resources
// (encoder.json + vocab.bpe), or a merge-free byte vocabulary that needs no
// external files. Both reserve the special tokens <|endoftext|>, <|mask|>
// and <|cls|>; ids of specials never come out of encode_word().
class Tokenizer {
 public:
  static Tokenizer byte_level();
  static Tokenizer load_gpt2(const std::filesystem::path& encoder_json,
                             const std::filesystem::path& merges_bpe);
  // From in-memory resources; `merges` holds "left right" pairs by rank.
  static Tokenizer from_vocab(
      const std::unordered_map<std::string, TokenId>& encoder,
      const std::vector<std::pair<std::string, std::string>>& merges);

  // Encodes one whitespace-free word. Words after the first in a text are
  // encoded with a leading space, which is how GPT-2 sees running text.
  std::vector<TokenId> encode_word(std::string_view word,
                                   bool leading_space) const;
  std::string decode(std::span<const TokenId> ids) const;

  std::int32_t vocab_size() const {
    return static_cast<std::int32_t>(id_to_token_.size());
  }
  bool is_special(TokenId id) const;
  TokenId mask_id() const { return mask_id_; }
  TokenId cls_id() const { return cls_id_; }
  TokenId eot_id() const { return eot_id_; }

  // Non-special ids whose text is a printable, whitespace-free, complete
  // UTF-8 fragment. Random replacement words are drawn from these.
  std::span<const TokenId> word_piece_ids() const { return word_pieces_; }
  // Every id that is not special.
  std::span<const TokenId> non_special_ids() const { return non_special_; }

 private:
  Tokenizer() = default;
  void finalize();
  std::vector<std::string> bpe(const std::string& piece) const;

  std::unordered_map<std::string, TokenId> token_to_id_;
  std::vector<std::string> id_to_token_;  // byte-encoded token strings
  std::map<std::pair<std::string, std::string>, int> merge_rank_;
  std::vector<TokenId> word_pieces_;
  std::vector<TokenId> non_special_;
  TokenId eot_id_ = -1;
  TokenId mask_id_ = -1;
  TokenId cls_id_ = -1;
};

// Expands timed words into timed tokens; every token carries the time span
// of the word it came from.
std::vector<corpus::TimedToken> tokenize_words(
    std::span<const corpus::TimedWord> words, const Tokenizer& tokenizer);

// GPT-2's reversible byte -> printable code point table, as UTF-8 strings.
const std::vector<std::string>& byte_symbols();

}  // namespace vidscript

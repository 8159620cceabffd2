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

#include "vidscript/tokenizer.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

#include "vidscript/text.hpp"

namespace vidscript {

namespace {

constexpr const char* kEndOfText = "<|endoftext|>";
constexpr const char* kMask = "<|mask|>";
constexpr const char* kCls = "<|cls|>";

struct ByteTables {
  std::vector<std::string> symbol_of_byte;             // 256 entries
  std::unordered_map<char32_t, std::uint8_t> byte_of;  // inverse
};

const ByteTables& byte_tables() {
  static const ByteTables tables = [] {
    ByteTables t;
    std::vector<int> bs;
    for (int b = '!'; b <= '~'; ++b) bs.push_back(b);
    for (int b = 0xA1; b <= 0xAC; ++b) bs.push_back(b);
    for (int b = 0xAE; b <= 0xFF; ++b) bs.push_back(b);
    std::vector<char32_t> cs(bs.begin(), bs.end());
    int extra = 0;
    for (int b = 0; b < 256; ++b) {
      if (std::find(bs.begin(), bs.end(), b) == bs.end()) {
        bs.push_back(b);
        cs.push_back(static_cast<char32_t>(256 + extra++));
      }
    }
    t.symbol_of_byte.resize(256);
    for (std::size_t k = 0; k < bs.size(); ++k) {
      t.symbol_of_byte[bs[k]] = text::to_utf8(std::u32string(1, cs[k]));
      t.byte_of[cs[k]] = static_cast<std::uint8_t>(bs[k]);
    }
    return t;
  }();
  return tables;
}

bool is_ascii_letter(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}
bool is_letter(unsigned char c) { return is_ascii_letter(c) || c >= 0x80; }
bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }

// GPT-2 pre-tokenization of a whitespace-free word (optionally with one
// leading space). Non-ASCII bytes are classed as letters.
std::vector<std::string> pre_tokenize(std::string_view word,
                                      bool leading_space) {
  static constexpr std::string_view kContractions[] = {"'s", "'t", "'re",
                                                       "'ve", "'m", "'ll",
                                                       "'d"};
  std::vector<std::string> out;
  std::size_t i = 0;
  bool space = leading_space;
  while (i < word.size()) {
    std::string piece = space ? " " : "";
    space = false;
    if (piece.empty() && word[i] == '\'') {
      bool matched = false;
      for (std::string_view c : kContractions) {
        if (word.substr(i, c.size()) == c) {
          out.emplace_back(c);
          i += c.size();
          matched = true;
          break;
        }
      }
      if (matched) continue;
    }
    const auto c = static_cast<unsigned char>(word[i]);
    auto same_class = [&](unsigned char x) {
      if (is_letter(c)) return is_letter(x);
      if (is_digit(c)) return is_digit(x);
      return !is_letter(x) && !is_digit(x);
    };
    std::size_t j = i;
    while (j < word.size() && same_class(static_cast<unsigned char>(word[j]))) {
      ++j;
    }
    if (j == i) ++j;
    piece.append(word.substr(i, j - i));
    out.push_back(std::move(piece));
    i = j;
  }
  if (out.empty() && leading_space) out.emplace_back(" ");
  return out;
}

std::vector<std::string> split_symbols(const std::string& s) {
  std::vector<std::string> out;
  for (char32_t c : text::to_code_points(s)) {
    out.push_back(text::to_utf8(std::u32string(1, c)));
  }
  return out;
}

}  // namespace

const std::vector<std::string>& byte_symbols() {
  return byte_tables().symbol_of_byte;
}

Tokenizer Tokenizer::byte_level() {
  Tokenizer t;
  for (int b = 0; b < 256; ++b) {
    const std::string& sym = byte_tables().symbol_of_byte[b];
    t.token_to_id_[sym] = static_cast<TokenId>(t.id_to_token_.size());
    t.id_to_token_.push_back(sym);
  }
  t.finalize();
  return t;
}

Tokenizer Tokenizer::from_vocab(
    const std::unordered_map<std::string, TokenId>& encoder,
    const std::vector<std::pair<std::string, std::string>>& merges) {
  Tokenizer t;
  TokenId max_id = -1;
  for (const auto& [tok, id] : encoder) {
    if (id < 0) throw Error(ErrorKind::kParse, "negative token id in vocab");
    max_id = std::max(max_id, id);
  }
  t.id_to_token_.assign(static_cast<std::size_t>(max_id + 1), std::string());
  for (const auto& [tok, id] : encoder) {
    if (!t.id_to_token_[id].empty()) {
      throw Error(ErrorKind::kParse, "duplicate token id in vocab");
    }
    t.id_to_token_[id] = tok;
    t.token_to_id_[tok] = id;
  }
  for (std::size_t r = 0; r < merges.size(); ++r) {
    t.merge_rank_.emplace(merges[r], static_cast<int>(r));
  }
  for (const std::string& sym : byte_tables().symbol_of_byte) {
    if (!t.token_to_id_.count(sym)) {
      throw Error(ErrorKind::kParse, "vocab lacks a single-byte token");
    }
  }
  t.finalize();
  return t;
}

Tokenizer Tokenizer::load_gpt2(const std::filesystem::path& encoder_json,
                               const std::filesystem::path& merges_bpe) {
  std::ifstream ej(encoder_json);
  if (!ej) {
    throw Error(ErrorKind::kIo, "cannot open " + encoder_json.string());
  }
  nlohmann::json j;
  try {
    ej >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, encoder_json.string() + ": " + e.what());
  }
  std::unordered_map<std::string, TokenId> encoder;
  for (auto it = j.begin(); it != j.end(); ++it) {
    encoder[it.key()] = it.value().get<TokenId>();
  }
  std::ifstream mf(merges_bpe);
  if (!mf) throw Error(ErrorKind::kIo, "cannot open " + merges_bpe.string());
  std::vector<std::pair<std::string, std::string>> merges;
  std::string line;
  while (std::getline(mf, line)) {
    if (line.empty() || line.rfind("#version", 0) == 0) continue;
    const auto sp = line.find(' ');
    if (sp == std::string::npos) {
      throw Error(ErrorKind::kParse, "bad merge line: " + line);
    }
    merges.emplace_back(line.substr(0, sp), line.substr(sp + 1));
  }
  return from_vocab(encoder, merges);
}

void Tokenizer::finalize() {
  auto add_special = [&](const char* name) {
    auto it = token_to_id_.find(name);
    if (it != token_to_id_.end()) return it->second;
    const auto id = static_cast<TokenId>(id_to_token_.size());
    id_to_token_.emplace_back(name);
    token_to_id_[name] = id;
    return id;
  };
  eot_id_ = add_special(kEndOfText);
  mask_id_ = add_special(kMask);
  cls_id_ = add_special(kCls);

  const auto& tables = byte_tables();
  for (TokenId id = 0; id < vocab_size(); ++id) {
    if (is_special(id) || id_to_token_[id].empty()) continue;
    non_special_.push_back(id);
    bool printable = true;
    for (char32_t c : text::to_code_points(id_to_token_[id])) {
      auto it = tables.byte_of.find(c);
      if (it == tables.byte_of.end() || it->second <= 0x20 ||
          it->second == 0x7f) {
        printable = false;
        break;
      }
    }
    if (!printable) continue;
    const TokenId one[] = {id};
    if (text::is_valid_utf8(decode(one))) word_pieces_.push_back(id);
  }
}

bool Tokenizer::is_special(TokenId id) const {
  return id == eot_id_ || id == mask_id_ || id == cls_id_;
}

std::vector<std::string> Tokenizer::bpe(const std::string& piece) const {
  std::vector<std::string> parts = split_symbols(piece);
  if (merge_rank_.empty()) return parts;
  while (parts.size() > 1) {
    int best_rank = std::numeric_limits<int>::max();
    std::size_t best = 0;
    for (std::size_t k = 0; k + 1 < parts.size(); ++k) {
      auto it = merge_rank_.find({parts[k], parts[k + 1]});
      if (it != merge_rank_.end() && it->second < best_rank) {
        best_rank = it->second;
        best = k;
      }
    }
    if (best_rank == std::numeric_limits<int>::max()) break;
    const std::string left = parts[best];
    const std::string right = parts[best + 1];
    std::vector<std::string> merged;
    merged.reserve(parts.size());
    for (std::size_t k = 0; k < parts.size();) {
      if (k + 1 < parts.size() && parts[k] == left && parts[k + 1] == right) {
        merged.push_back(left + right);
        k += 2;
      } else {
        merged.push_back(parts[k]);
        ++k;
      }
    }
    parts = std::move(merged);
  }
  return parts;
}

std::vector<TokenId> Tokenizer::encode_word(std::string_view word,
                                            bool leading_space) const {
  const auto& tables = byte_tables();
  std::vector<TokenId> ids;
  for (const std::string& piece : pre_tokenize(word, leading_space)) {
    std::string symbols;
    for (unsigned char b : piece) symbols += tables.symbol_of_byte[b];
    for (const std::string& part : bpe(symbols)) {
      auto it = token_to_id_.find(part);
      if (it != token_to_id_.end()) {
        ids.push_back(it->second);
        continue;
      }
      // Unknown merged token: fall back to its bytes.
      for (const std::string& sym : split_symbols(part)) {
        ids.push_back(token_to_id_.at(sym));
      }
    }
  }
  return ids;
}

std::string Tokenizer::decode(std::span<const TokenId> ids) const {
  const auto& tables = byte_tables();
  std::string out;
  for (TokenId id : ids) {
    if (id < 0 || id >= vocab_size()) {
      throw Error(ErrorKind::kOutOfRange,
                  "token id " + std::to_string(id) + " outside vocabulary");
    }
    if (is_special(id)) {
      out += id_to_token_[id];
      continue;
    }
    for (char32_t c : text::to_code_points(id_to_token_[id])) {
      auto it = tables.byte_of.find(c);
      if (it != tables.byte_of.end()) out.push_back(static_cast<char>(it->second));
    }
  }
  return out;
}

std::vector<corpus::TimedToken> tokenize_words(
    std::span<const corpus::TimedWord> words, const Tokenizer& tokenizer) {
  std::vector<corpus::TimedToken> out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    for (TokenId id : tokenizer.encode_word(words[i].text, i > 0)) {
      out.push_back(corpus::TimedToken{id, i, words[i].start, words[i].end});
    }
  }
  return out;
}

}  // namespace vidscript

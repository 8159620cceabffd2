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

#include "vidscript/denoise.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "vidscript/text.hpp"

namespace vidscript::denoise {

void CorruptionConfig::validate() const {
  auto check = [](double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw Error(ErrorKind::kInvalidArgument,
                  std::string(name) + " must lie in [0, 1]");
    }
  };
  check(replace_prob, "replace_prob");
  check(homophone_share, "homophone_share");
  check(filler_prob, "filler_prob");
  if (filler_prob > 0.0 && filler_lexicon.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "filler lexicon is empty");
  }
}

PronunciationTable PronunciationTable::load_cmudict(
    const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  return parse_cmudict(in);
}

PronunciationTable PronunciationTable::parse_cmudict(std::istream& in) {
  PronunciationTable table;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.rfind(";;;", 0) == 0) continue;
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    // Strip the "(N)" alternate-pronunciation marker.
    if (auto paren = word.find('('); paren != std::string::npos && paren > 0) {
      word.resize(paren);
    }
    std::string phone, pron;
    while (ls >> phone) {
      if (phone[0] == '#') break;  // trailing comment in newer releases
      if (!pron.empty()) pron += ' ';
      pron += phone;
    }
    if (word.empty() || pron.empty()) continue;
    table.add(word, pron);
  }
  return table;
}

void PronunciationTable::add(std::string_view word,
                             std::string_view pronunciation) {
  const std::string w = text::lowercase_strip_punct(word);
  if (w.empty()) return;
  const std::string p(pronunciation);
  auto& words = words_by_pron_[p];
  if (std::find(words.begin(), words.end(), w) == words.end()) {
    words.push_back(w);
  }
  auto& prons = prons_by_word_[w];
  if (std::find(prons.begin(), prons.end(), p) == prons.end()) {
    prons.push_back(p);
  }
  rebuild(p);
}

void PronunciationTable::rebuild(const std::string& pronunciation) {
  for (const std::string& w : words_by_pron_[pronunciation]) {
    std::set<std::string> others;
    for (const std::string& p : prons_by_word_[w]) {
      for (const std::string& o : words_by_pron_[p]) {
        if (o != w) others.insert(o);
      }
    }
    homophones_[w].assign(others.begin(), others.end());
  }
}

std::span<const std::string> PronunciationTable::homophones(
    const std::string& word) const {
  auto it = homophones_.find(word);
  if (it == homophones_.end()) return {};
  return it->second;
}

bool PronunciationTable::is_symmetric() const {
  for (const auto& [w, hs] : homophones_) {
    for (const std::string& h : hs) {
      auto it = homophones_.find(h);
      if (it == homophones_.end() ||
          !std::binary_search(it->second.begin(), it->second.end(), w)) {
        return false;
      }
    }
  }
  return true;
}

CorruptedDocument corrupt_document(std::span<const std::string> clean,
                                   const CorruptionConfig& cfg,
                                   const PronunciationTable& table,
                                   const Tokenizer& tokenizer) {
  cfg.validate();
  const auto pieces = tokenizer.word_piece_ids();
  Rng rng(cfg.rng_seed);
  CorruptedDocument doc;
  doc.words.reserve(clean.size() + clean.size() / 50 + 1);
  for (const std::string& raw : clean) {
    std::string word = text::lowercase_strip_punct(raw);
    if (word.empty()) continue;
    if (rng.bernoulli(cfg.filler_prob)) {
      doc.words.push_back(
          cfg.filler_lexicon[rng.index(cfg.filler_lexicon.size())]);
      ++doc.fillers;
    }
    if (rng.bernoulli(cfg.replace_prob)) {
      ++doc.replacements;
      const bool try_homophone = rng.bernoulli(cfg.homophone_share);
      const auto homs = table.homophones(word);
      if (try_homophone && !homs.empty()) {
        word = homs[rng.index(homs.size())];
        ++doc.homophone_replacements;
      } else if (!pieces.empty()) {
        const std::size_t len =
            std::max<std::size_t>(1, tokenizer.encode_word(word, true).size());
        std::vector<TokenId> ids(len);
        for (TokenId& id : ids) id = pieces[rng.index(pieces.size())];
        word = tokenizer.decode(ids);
      }
    }
    doc.words.push_back(std::move(word));
  }
  return doc;
}

GateDecision perplexity_gate(std::span<const double> per_group_perplexities,
                             double threshold) {
  if (per_group_perplexities.empty()) {
    throw Error(ErrorKind::kEmptyInput, "perplexity_gate: no groups");
  }
  if (!(threshold > 0.0) || !std::isfinite(threshold)) {
    throw Error(ErrorKind::kInvalidArgument,
                "perplexity threshold must be positive");
  }
  for (std::size_t g = 0; g < per_group_perplexities.size(); ++g) {
    const double p = per_group_perplexities[g];
    if (std::isnan(p) || p <= 0.0) {
      throw Error(ErrorKind::kInvalidArgument,
                  "perplexity of group " + std::to_string(g) +
                      " is not a positive number");
    }
    if (p > threshold) return GateDecision{false, g};
  }
  return GateDecision{true, std::nullopt};
}

}  // namespace vidscript::denoise

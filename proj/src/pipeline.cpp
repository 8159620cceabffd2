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

#include "vidscript/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>
#include <variant>

#include "vidscript/align.hpp"
#include "vidscript/objectives.hpp"
#include "vidscript/reorder.hpp"
#include "vidscript/tensor_io.hpp"
#include "vidscript/text.hpp"

namespace vidscript::pipeline {

using nlohmann::json;

namespace {

void check_prob(double p, const char* name) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument,
                std::string(name) + " must lie in [0, 1]");
  }
}

void check_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw Error(ErrorKind::kInvalidArgument, std::string(name) + " must be positive");
  }
}

template <typename T>
void overlay(const json& j, const char* key, T& field) {
  auto it = j.find(key);
  if (it == j.end()) return;
  try {
    field = it->get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("config field ") + key + ": " +
                                       e.what());
  }
}

}  // namespace

// Config -----------------------------------------------------------------------

void PipelineConfig::validate() const {
  if (encoder_json.empty() != merges_bpe.empty()) {
    throw Error(ErrorKind::kInvalidArgument,
                "encoder_json and merges_bpe must be given together");
  }
  if (tokens_per_segment == 0) {
    throw Error(ErrorKind::kInvalidArgument, "tokens_per_segment must be positive");
  }
  if (segments_per_example == 0) {
    throw Error(ErrorKind::kInvalidArgument, "segments_per_example must be positive");
  }
  if (metadata.max_duration.count < 0) {
    throw Error(ErrorKind::kInvalidArgument, "max_duration_s must be non-negative");
  }
  check_prob(thumbnails.prob_threshold, "object_prob_threshold");
  if (!(thumbnails.sim_threshold >= -1.0 && thumbnails.sim_threshold <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "similarity_threshold must lie in [-1, 1]");
  }
  check_positive(perplexity_threshold, "perplexity_threshold");
  corruption.validate();
  mask.validate();
  check_positive(temperature, "temperature");
  if (!(contrastive_coeff >= 0.0) || !std::isfinite(contrastive_coeff)) {
    throw Error(ErrorKind::kInvalidArgument, "contrastive_coeff must be non-negative");
  }
  segmenter::sequence_shape(shape);
}

json PipelineConfig::to_json() const {
  return json{
      {"encoder_json", encoder_json},
      {"merges_bpe", merges_bpe},
      {"tokens_per_segment", tokens_per_segment},
      {"segments_per_example", segments_per_example},
      {"cross_video", cross_video},
      {"max_duration_s", metadata.max_duration.seconds()},
      {"excluded_categories", metadata.excluded_categories},
      {"object_prob_threshold", thumbnails.prob_threshold},
      {"min_objects", thumbnails.min_objects},
      {"similarity_threshold", thumbnails.sim_threshold},
      {"distinct_classes", thumbnails.distinct_classes},
      {"perplexity_threshold", perplexity_threshold},
      {"replace_prob", corruption.replace_prob},
      {"homophone_share", corruption.homophone_share},
      {"filler_prob", corruption.filler_prob},
      {"filler_lexicon", corruption.filler_lexicon},
      {"mask_rate", mask.rate},
      {"attended_share", mask.attended_share},
      {"top_frac", mask.top_frac},
      {"span_mean", mask.span_mean},
      {"mask_token_prob", mask.mask_token_prob},
      {"random_token_prob", mask.random_token_prob},
      {"temperature", temperature},
      {"contrastive_coeff", contrastive_coeff},
      {"image_width", shape.image_width},
      {"image_height", shape.image_height},
      {"patch", shape.patch},
      {"pool", shape.pool},
      {"group_segments", shape.group_segments},
      {"seed", seed},
  };
}

PipelineConfig PipelineConfig::from_json(const json& j, PipelineConfig c) {
  if (!j.is_object()) throw Error(ErrorKind::kParse, "config is not an object");
  const json known = c.to_json();
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!known.contains(it.key())) {
      throw Error(ErrorKind::kParse, "unknown config key '" + it.key() + "'");
    }
  }
  overlay(j, "encoder_json", c.encoder_json);
  overlay(j, "merges_bpe", c.merges_bpe);
  overlay(j, "tokens_per_segment", c.tokens_per_segment);
  overlay(j, "segments_per_example", c.segments_per_example);
  overlay(j, "cross_video", c.cross_video);
  if (j.contains("max_duration_s")) {
    double s = 0;
    overlay(j, "max_duration_s", s);
    c.metadata.max_duration = Millis::from_seconds(s);
  }
  overlay(j, "excluded_categories", c.metadata.excluded_categories);
  overlay(j, "object_prob_threshold", c.thumbnails.prob_threshold);
  overlay(j, "min_objects", c.thumbnails.min_objects);
  overlay(j, "similarity_threshold", c.thumbnails.sim_threshold);
  overlay(j, "distinct_classes", c.thumbnails.distinct_classes);
  overlay(j, "perplexity_threshold", c.perplexity_threshold);
  overlay(j, "replace_prob", c.corruption.replace_prob);
  overlay(j, "homophone_share", c.corruption.homophone_share);
  overlay(j, "filler_prob", c.corruption.filler_prob);
  overlay(j, "filler_lexicon", c.corruption.filler_lexicon);
  overlay(j, "mask_rate", c.mask.rate);
  overlay(j, "attended_share", c.mask.attended_share);
  overlay(j, "top_frac", c.mask.top_frac);
  overlay(j, "span_mean", c.mask.span_mean);
  overlay(j, "mask_token_prob", c.mask.mask_token_prob);
  overlay(j, "random_token_prob", c.mask.random_token_prob);
  overlay(j, "temperature", c.temperature);
  overlay(j, "contrastive_coeff", c.contrastive_coeff);
  overlay(j, "image_width", c.shape.image_width);
  overlay(j, "image_height", c.shape.image_height);
  overlay(j, "patch", c.shape.patch);
  overlay(j, "pool", c.shape.pool);
  overlay(j, "group_segments", c.shape.group_segments);
  overlay(j, "seed", c.seed);
  c.shape.tokens_per_segment = c.tokens_per_segment;
  c.shape.segments_per_example = c.segments_per_example;
  c.corruption.rng_seed = c.seed;
  return c;
}

PipelineConfig PipelineConfig::from_json(const json& j) {
  return from_json(j, PipelineConfig());
}

std::uint64_t PipelineConfig::hash() const { return fnv1a64(to_json().dump()); }

Tokenizer PipelineConfig::make_tokenizer() const {
  if (encoder_json.empty()) return Tokenizer::byte_level();
  return Tokenizer::load_gpt2(encoder_json, merges_bpe);
}

// Raw records ------------------------------------------------------------------

RawVideo raw_video_from_json(const json& j) {
  corpus::check_schema_version(j);
  auto str = [&](const char* key) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string()) {
      throw Error(ErrorKind::kParse, std::string("missing string field ") + key);
    }
    return it->get<std::string>();
  };
  RawVideo v;
  v.video_id = str("video_id");
  v.duration = Millis::from_seconds(corpus::seconds_field(j, "duration_s"));
  v.category = str("category");
  auto asr = j.find("has_english_asr");
  if (asr == j.end() || !asr->is_boolean()) {
    throw Error(ErrorKind::kParse, "missing boolean field has_english_asr");
  }
  v.has_english_asr = asr->get<bool>();
  if (auto it = j.find("thumbnails"); it != j.end() && !it->is_null()) {
    if (!it->is_object()) throw Error(ErrorKind::kParse, "thumbnails is not an object");
    filter::ThumbnailEvidence ev;
    ev.object_probs = tensor_io::matrix_from_json(it->value("object_probs", json()));
    ev.features = tensor_io::matrix_from_json(it->value("features", json()));
    v.thumbnails = std::move(ev);
  }
  auto words = j.find("words");
  if (words == j.end() || !words->is_array()) {
    throw Error(ErrorKind::kParse, "missing array field words");
  }
  for (const json& w : *words) v.words.push_back(corpus::timed_word_from_json(w));
  if (auto it = j.find("clean_words"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) throw Error(ErrorKind::kParse, "clean_words is not an array");
    std::vector<std::string> clean;
    for (const json& w : *it) {
      if (!w.is_string()) throw Error(ErrorKind::kParse, "clean word is not a string");
      clean.push_back(w.get<std::string>());
    }
    v.clean_words = std::move(clean);
  }
  if (auto it = j.find("group_perplexities"); it != j.end() && !it->is_null()) {
    if (!it->is_array()) {
      throw Error(ErrorKind::kParse, "group_perplexities is not an array");
    }
    for (const json& p : *it) {
      if (!p.is_number()) throw Error(ErrorKind::kParse, "non-numeric perplexity");
      v.group_perplexities.push_back(p.get<double>());
    }
  }
  return v;
}

json to_json(const RawVideo& v) {
  json words = json::array();
  for (const auto& w : v.words) words.push_back(corpus::to_json(w));
  json out{{"schema_version", corpus::kSchemaVersion},
           {"video_id", v.video_id},
           {"duration_s", v.duration.seconds()},
           {"category", v.category},
           {"has_english_asr", v.has_english_asr},
           {"words", std::move(words)}};
  if (v.thumbnails) {
    out["thumbnails"] = {
        {"object_probs", tensor_io::matrix_to_json(v.thumbnails->object_probs)},
        {"features", tensor_io::matrix_to_json(v.thumbnails->features)}};
  }
  if (v.clean_words) out["clean_words"] = *v.clean_words;
  if (!v.group_perplexities.empty()) out["group_perplexities"] = v.group_perplexities;
  return out;
}

// Manifest ---------------------------------------------------------------------

std::size_t Manifest::rejected_total() const {
  std::size_t n = 0;
  for (const auto& [reason, count] : rejected) n += count;
  return n;
}

json Manifest::to_json() const {
  return json{{"schema_version", corpus::kSchemaVersion},
              {"lines", lines},
              {"parse_errors", parse_errors},
              {"inputs", inputs},
              {"accepted", accepted},
              {"rejected", rejected},
              {"segments", segments},
              {"examples", examples},
              {"dropped_remainder", dropped_remainder},
              {"config_hash", config_hash},
              {"config", effective_config}};
}

// Run --------------------------------------------------------------------------

namespace {

struct ParseFailure {
  std::string message;
};
struct Rejected {
  std::string reason;
};
using Outcome = std::variant<ParseFailure, Rejected, corpus::VideoRecord>;

std::map<std::string, std::size_t> empty_reason_counts() {
  std::map<std::string, std::size_t> m;
  for (filter::Reason r : filter::kRejectReasons) m[std::string(filter::reason_name(r))] = 0;
  m[kHighPerplexity] = 0;
  m[kUnsegmentable] = 0;
  return m;
}

std::vector<std::string> normalized(std::span<const std::string> words) {
  std::vector<std::string> out;
  out.reserve(words.size());
  for (const auto& w : words) out.push_back(text::lowercase_strip_punct(w));
  return out;
}

Outcome process(const std::string& line, const PipelineConfig& cfg,
                const Tokenizer& tok) {
  RawVideo raw;
  try {
    raw = raw_video_from_json(json::parse(line));
  } catch (const json::exception& e) {
    return ParseFailure{e.what()};
  } catch (const Error& e) {
    return ParseFailure{e.what()};
  }
  try {
    if (auto violations = corpus::validate_transcript(raw.words); !violations.empty()) {
      return ParseFailure{violations.front().field + ": " + violations.front().message};
    }
    const filter::Metadata meta{raw.has_english_asr, raw.duration, raw.category};
    if (auto d = filter::metadata_gate(meta, cfg.metadata); !d.accepted()) {
      return Rejected{std::string(filter::reason_name(d.reason()))};
    }
    if (raw.thumbnails) {
      if (auto d = filter::thumbnail_gate(*raw.thumbnails, cfg.thumbnails);
          !d.accepted()) {
        return Rejected{std::string(filter::reason_name(d.reason()))};
      }
    }
    if (!raw.group_perplexities.empty() &&
        !denoise::perplexity_gate(raw.group_perplexities, cfg.perplexity_threshold)
             .accept) {
      return Rejected{kHighPerplexity};
    }

    std::vector<corpus::TimedWord> words = raw.words;
    corpus::Variant variant = corpus::Variant::kNoisy;
    if (raw.clean_words && !raw.clean_words->empty() && !words.empty()) {
      std::vector<std::string> noisy_text;
      for (const auto& w : words) noisy_text.push_back(w.text);
      const auto alignment =
          align::dtw_align(normalized(noisy_text), normalized(*raw.clean_words));
      words = align::transfer_timing(alignment, raw.words, *raw.clean_words);
      align::clamp_overlaps(words);
      variant = corpus::Variant::kClean;
    }

    corpus::VideoRecord rec;
    rec.video_id = raw.video_id;
    rec.duration = raw.duration;
    rec.category = raw.category;
    rec.has_english_asr = raw.has_english_asr;
    const auto tokens = tokenize_words(words, tok);
    try {
      rec.segments =
          segmenter::segment_transcript(tokens, cfg.tokens_per_segment, variant);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kOversizeWord) throw;
      return Rejected{kUnsegmentable};
    }
    return rec;
  } catch (const Error& e) {
    return ParseFailure{e.what()};
  }
}

// Runs fn(i) for i in [0, n) on up to `jobs` threads.
template <typename Fn>
void parallel_for(std::size_t n, std::size_t jobs, Fn&& fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (std::size_t t = 0; t < jobs; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

constexpr std::size_t kChunk = 256;

}  // namespace

RunResult run_pipeline(const PipelineConfig& config, std::istream& in,
                       std::ostream& out, std::size_t jobs) {
  config.validate();
  const Tokenizer tok = config.make_tokenizer();
  RunResult result;
  Manifest& m = result.manifest;
  m.rejected = empty_reason_counts();
  m.config_hash = config.hash();
  m.effective_config = config.to_json();

  segmenter::SegmentPacker packer(config.segments_per_example, config.cross_video);
  std::size_t line_no = 0;
  std::vector<std::pair<std::size_t, std::string>> chunk;
  std::vector<Outcome> outcomes;

  auto flush = [&] {
    outcomes.assign(chunk.size(), ParseFailure{});
    parallel_for(chunk.size(), jobs, [&](std::size_t i) {
      outcomes[i] = process(chunk[i].second, config, tok);
    });
    for (std::size_t i = 0; i < chunk.size(); ++i) {
      if (auto* f = std::get_if<ParseFailure>(&outcomes[i])) {
        ++m.parse_errors;
        result.errors.push_back("line " + std::to_string(chunk[i].first) + ": " +
                                f->message);
        continue;
      }
      ++m.inputs;
      if (auto* r = std::get_if<Rejected>(&outcomes[i])) {
        ++m.rejected[r->reason];
        continue;
      }
      ++m.accepted;
      for (const auto& ex : packer.push(std::get<corpus::VideoRecord>(outcomes[i]))) {
        out << corpus::to_json(ex).dump(-1, ' ', false, json::error_handler_t::replace)
            << '\n';
      }
    }
    chunk.clear();
  };

  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    ++m.lines;
    chunk.emplace_back(line_no, std::move(line));
    if (chunk.size() == kChunk) flush();
  }
  if (in.bad()) throw Error(ErrorKind::kIo, "read error on input stream");
  flush();
  packer.finish();
  m.segments = packer.segments_in();
  m.examples = packer.examples_out();
  m.dropped_remainder = packer.dropped();
  out.flush();
  if (!out) throw Error(ErrorKind::kIo, "write error on output stream");
  return result;
}

// Selfcheck --------------------------------------------------------------------

namespace {

CheckResult check_shape(const segmenter::ShapeConfig& cfg) {
  CheckResult r{"shape", false, ""};
  try {
    const auto s = segmenter::sequence_shape(cfg);
    std::ostringstream os;
    os << "cells=" << s.cells_per_frame << " visual=" << s.visual_tokens_per_frame
       << " joint=" << s.joint_sequence_length
       << " language_only=" << s.language_only_length;
    r.detail = os.str();
    r.passed = s == segmenter::SequenceShape{66, 67, 396, 512};
  } catch (const Error& e) {
    r.detail = std::string(error_kind_name(e.kind())) + ": " + e.what();
  }
  return r;
}

Matrix random_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  Matrix m(rows, cols);
  for (double& v : m.data()) v = 2.0 * rng.uniform01() - 1.0;
  return m;
}

// Loss as a function of unnormalized inputs; lets finite differences move
// freely while the loss itself only ever sees unit rows.
double loss_of_raw(const Matrix& f, const Matrix& c, double tau) {
  return objectives::contrastive_loss(objectives::l2_normalize(f),
                                      objectives::l2_normalize(c), tau)
      .value;
}

// Chain rule through row normalization: g_raw = (g - (g.u) u) / |x|.
Matrix through_normalize(const Matrix& raw, const Matrix& g) {
  Matrix out(raw.rows(), raw.cols());
  for (std::size_t r = 0; r < raw.rows(); ++r) {
    const double norm = l2_norm(raw.row(r));
    double gu = 0.0;
    for (std::size_t k = 0; k < raw.cols(); ++k) gu += g(r, k) * raw(r, k) / norm;
    for (std::size_t k = 0; k < raw.cols(); ++k) {
      out(r, k) = (g(r, k) - gu * raw(r, k) / norm) / norm;
    }
  }
  return out;
}

double relative_error(std::span<const double> a, std::span<const double> b) {
  double diff = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    diff += (a[k] - b[k]) * (a[k] - b[k]);
    na += a[k] * a[k];
    nb += b[k] * b[k];
  }
  // Floored so a vanishing gradient is compared absolutely.
  const double denom = std::max({std::sqrt(na), std::sqrt(nb), 1e-3});
  return std::sqrt(diff) / denom;
}

CheckResult check_contrastive(double tau, std::uint64_t seed) {
  CheckResult r{"contrastive_gradient", false, ""};
  try {
    Rng rng(derive_seed(seed, "selfcheck/contrastive"));
    double worst = 0.0;
    for (int trial = 0; trial < 5; ++trial) {
      const std::size_t b = 2 + rng.index(5), d = 3 + rng.index(6);
      Matrix f = random_matrix(b, d, rng), c = random_matrix(b, d, rng);
      const auto rep = objectives::contrastive_loss(
          objectives::l2_normalize(f), objectives::l2_normalize(c), tau, true);
      const Matrix* raws[] = {&f, &c};
      for (int which = 0; which < 2; ++which) {
        const Matrix analytic = through_normalize(*raws[which], rep.gradients[which]);
        Matrix numeric(b, d);
        constexpr double h = 1e-5;
        for (std::size_t i = 0; i < b; ++i) {
          for (std::size_t k = 0; k < d; ++k) {
            Matrix plus = *raws[which], minus = *raws[which];
            plus(i, k) += h;
            minus(i, k) -= h;
            const double lp = which == 0 ? loss_of_raw(plus, c, tau)
                                         : loss_of_raw(f, plus, tau);
            const double lm = which == 0 ? loss_of_raw(minus, c, tau)
                                         : loss_of_raw(f, minus, tau);
            numeric(i, k) = (lp - lm) / (2 * h);
          }
        }
        worst = std::max(worst, relative_error(analytic.data(), numeric.data()));
      }
    }
    std::ostringstream os;
    os << "max relative error " << worst;
    r.detail = os.str();
    r.passed = worst <= 1e-4;
  } catch (const Error& e) {
    r.detail = std::string(error_kind_name(e.kind())) + ": " + e.what();
  }
  return r;
}

double brute_force_assignment(const Matrix& w) {
  // Rows choose distinct columns; with more rows than columns some rows
  // stay unmatched, which the padded permutation covers.
  const std::size_t n = std::max(w.rows(), w.cols());
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  double best = -std::numeric_limits<double>::infinity();
  do {
    double s = 0.0;
    for (std::size_t i = 0; i < w.rows(); ++i) {
      if (perm[i] < w.cols()) s += w(i, perm[i]);
    }
    best = std::max(best, s);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

CheckResult check_hungarian(std::uint64_t seed) {
  CheckResult r{"hungarian_vs_brute_force", false, ""};
  try {
    Rng rng(derive_seed(seed, "selfcheck/hungarian"));
    std::size_t mismatches = 0;
    constexpr int kTrials = 200;
    for (int t = 0; t < kTrials; ++t) {
      const std::size_t rows = 1 + rng.index(6), cols = 1 + rng.index(6);
      Matrix w = random_matrix(rows, cols, rng);
      if (t % 2) {
        for (double& v : w.data()) v = std::round(v * 3);  // force ties
      }
      const auto a = reorder::hungarian_match(w);
      if (std::abs(a.total - brute_force_assignment(w)) > 1e-9) ++mismatches;
    }
    r.detail = std::to_string(kTrials) + " matrices, " +
               std::to_string(mismatches) + " mismatches";
    r.passed = mismatches == 0;
  } catch (const Error& e) {
    r.detail = std::string(error_kind_name(e.kind())) + ": " + e.what();
  }
  return r;
}

// Enumerates every monotone path with unit steps.
std::int64_t brute_force_dtw(const std::vector<std::string>& a,
                             const std::vector<std::string>& b, std::size_t i,
                             std::size_t j) {
  const auto pair = static_cast<std::int64_t>(align::levenshtein(a[i], b[j]));
  if (i + 1 == a.size() && j + 1 == b.size()) return pair;
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  if (i + 1 < a.size() && j + 1 < b.size()) {
    best = std::min(best, brute_force_dtw(a, b, i + 1, j + 1));
  }
  if (j + 1 < b.size()) {
    best = std::min(best, brute_force_dtw(a, b, i, j + 1) +
                              static_cast<std::int64_t>(
                                  text::to_code_points(b[j + 1]).size()));
  }
  if (i + 1 < a.size()) {
    best = std::min(best, brute_force_dtw(a, b, i + 1, j) +
                              static_cast<std::int64_t>(
                                  text::to_code_points(a[i + 1]).size()));
  }
  return pair + best;
}

CheckResult check_dtw(std::uint64_t seed) {
  CheckResult r{"dtw_vs_brute_force", false, ""};
  try {
    Rng rng(derive_seed(seed, "selfcheck/dtw"));
    static const char* kWords[] = {"the", "a", "cat", "cut", "at", "um", "sat", "sad", "mat", ""};
    auto draw = [&] {
      std::vector<std::string> w(1 + rng.index(5));
      for (auto& s : w) s = kWords[rng.index(std::size(kWords))];
      return w;
    };
    std::size_t mismatches = 0;
    constexpr int kTrials = 100;
    for (int t = 0; t < kTrials; ++t) {
      const auto a = draw(), b = draw();
      const auto al = align::dtw_align(a, b);
      align::check_alignment(al, a.size(), b.size());
      if (al.total_cost != static_cast<double>(brute_force_dtw(a, b, 0, 0))) {
        ++mismatches;
      }
    }
    r.detail = std::to_string(kTrials) + " pairs, " + std::to_string(mismatches) +
               " mismatches";
    r.passed = mismatches == 0;
  } catch (const Error& e) {
    r.detail = std::string(error_kind_name(e.kind())) + ": " + e.what();
  }
  return r;
}

}  // namespace

std::vector<CheckResult> selfcheck(const SelfcheckOptions& opts) {
  return {check_shape(opts.shape), check_contrastive(opts.temperature, opts.seed),
          check_hungarian(opts.seed), check_dtw(opts.seed)};
}

}  // namespace vidscript::pipeline

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

// vidscript: command-line front end. Every subcommand reads line-delimited
// JSON (stdin by default) and writes line-delimited JSON (stdout).
//
// Exit status: 0 on success, 1 if any input record was rejected as
// malformed, 2 on fatal errors (bad flags, unreadable files, I/O).

#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "vidscript/align.hpp"
#include "vidscript/corpus.hpp"
#include "vidscript/denoise.hpp"
#include "vidscript/filter.hpp"
#include "vidscript/masking.hpp"
#include "vidscript/objectives.hpp"
#include "vidscript/pipeline.hpp"
#include "vidscript/reorder.hpp"
#include "vidscript/segmenter.hpp"
#include "vidscript/tensor_io.hpp"
#include "vidscript/text.hpp"
#include "vidscript/tokenizer.hpp"

using nlohmann::json;
namespace vs = vidscript;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDataErrors = 1;
constexpr int kExitFatal = 2;

struct Context {
  std::string config_path;
  std::string in_path = "-";
  std::string out_path = "-";
  std::size_t jobs = 1;
  // Flag values that override config-file entries, applied after parsing.
  std::vector<std::function<void(json&)>> overrides;

  vs::pipeline::PipelineConfig config() const {
    vs::pipeline::PipelineConfig base;
    if (!config_path.empty()) {
      std::ifstream f(config_path);
      if (!f) throw vs::Error(vs::ErrorKind::kIo, "cannot open " + config_path);
      json j;
      try {
        f >> j;
      } catch (const json::exception& e) {
        throw vs::Error(vs::ErrorKind::kParse, config_path + ": " + e.what());
      }
      base = vs::pipeline::PipelineConfig::from_json(j, base);
    }
    json flags = json::object();
    for (const auto& apply : overrides) apply(flags);
    auto cfg = vs::pipeline::PipelineConfig::from_json(flags, base);
    cfg.validate();
    return cfg;
  }
};

template <typename T>
CLI::Option* config_option(CLI::App* app, Context& ctx, const std::string& flag,
                           const char* key, const std::string& help) {
  auto value = std::make_shared<T>();
  CLI::Option* opt = app->add_option(flag, *value, help);
  ctx.overrides.push_back([=](json& j) {
    if (opt->count()) j[key] = *value;
  });
  return opt;
}

void config_flag(CLI::App* app, Context& ctx, const std::string& flag,
                 const char* key, bool value, const std::string& help) {
  CLI::Option* opt = app->add_flag(flag, help);
  ctx.overrides.push_back([=](json& j) {
    if (opt->count()) j[key] = value;
  });
}

void io_options(CLI::App* app, Context& ctx) {
  app->add_option("--in,-i", ctx.in_path, "input file, - for stdin");
  app->add_option("--out,-o", ctx.out_path, "output file, - for stdout");
}

void tokenizer_options(CLI::App* app, Context& ctx) {
  config_option<std::string>(app, ctx, "--encoder-json", "encoder_json",
                             "GPT-2 encoder.json");
  config_option<std::string>(app, ctx, "--merges-bpe", "merges_bpe",
                             "GPT-2 vocab.bpe");
}

// Streams ---------------------------------------------------------------------

class Streams {
 public:
  explicit Streams(const Context& ctx) {
    if (ctx.in_path != "-") {
      in_file_.open(ctx.in_path);
      if (!in_file_) throw vs::Error(vs::ErrorKind::kIo, "cannot open " + ctx.in_path);
    }
    if (ctx.out_path != "-") {
      out_file_.open(ctx.out_path, std::ios::binary);
      if (!out_file_) {
        throw vs::Error(vs::ErrorKind::kIo, "cannot create " + ctx.out_path);
      }
    }
  }
  std::istream& in() { return in_file_.is_open() ? in_file_ : std::cin; }
  std::ostream& out() { return out_file_.is_open() ? out_file_ : std::cout; }

  void emit(const json& j) {
    out() << j.dump(-1, ' ', false, json::error_handler_t::replace) << '\n';
  }

  void finish() {
    out().flush();
    if (!out()) throw vs::Error(vs::ErrorKind::kIo, "write failed");
  }

 private:
  std::ifstream in_file_;
  std::ofstream out_file_;
};

// Calls fn(record, line_no) for each non-blank line. Record-level errors are
// reported on stderr and counted; the return value is that count.
std::size_t for_each_record(std::istream& in,
                            const std::function<void(const json&, std::size_t)>& fn) {
  std::size_t errors = 0, line_no = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const json j = json::parse(line);
      vs::corpus::check_schema_version(j);
      fn(j, line_no);
    } catch (const json::exception& e) {
      ++errors;
      std::cerr << "line " << line_no << ": parse: " << e.what() << "\n";
    } catch (const vs::Error& e) {
      ++errors;
      std::cerr << "line " << line_no << ": " << vs::error_kind_name(e.kind())
                << ": " << e.what() << "\n";
    }
  }
  if (in.bad()) throw vs::Error(vs::ErrorKind::kIo, "read error");
  return errors;
}

json with_version(json j) {
  j["schema_version"] = vs::corpus::kSchemaVersion;
  return j;
}

std::string record_id(const json& j, std::size_t line_no) {
  auto it = j.find("id");
  if (it == j.end()) it = j.find("video_id");
  if (it != j.end() && it->is_string()) return it->get<std::string>();
  return "line:" + std::to_string(line_no);
}

std::vector<std::string> string_list(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_array()) {
    throw vs::Error(vs::ErrorKind::kParse, std::string("missing array field ") + key);
  }
  std::vector<std::string> out;
  for (const json& w : *it) {
    if (!w.is_string()) {
      throw vs::Error(vs::ErrorKind::kParse, std::string(key) + " holds a non-string");
    }
    out.push_back(w.get<std::string>());
  }
  return out;
}

template <typename T>
std::vector<T> number_list(const json& j, const char* key, bool required = true) {
  auto it = j.find(key);
  if (it == j.end() && !required) return {};
  if (it == j.end() || !it->is_array()) {
    throw vs::Error(vs::ErrorKind::kParse, std::string("missing array field ") + key);
  }
  try {
    return it->get<std::vector<T>>();
  } catch (const json::exception& e) {
    throw vs::Error(vs::ErrorKind::kParse, std::string("bad field ") + key + ": " + e.what());
  }
}

int status(std::size_t errors) { return errors ? kExitDataErrors : kExitOk; }

json load_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw vs::Error(vs::ErrorKind::kIo, "cannot open " + path);
  try {
    json j;
    f >> j;
    return j;
  } catch (const json::exception& e) {
    throw vs::Error(vs::ErrorKind::kParse, path + ": " + e.what());
  }
}

// Subcommands -----------------------------------------------------------------

int cmd_filter(const Context& ctx) {
  const auto cfg = ctx.config();
  Streams io(ctx);
  const std::size_t errors = for_each_record(io.in(), [&](const json& j, std::size_t) {
    vs::pipeline::RawVideo v;
    json probe = j;
    if (!probe.contains("words")) probe["words"] = json::array();
    v = vs::pipeline::raw_video_from_json(probe);
    vs::filter::FilterDecision d = vs::filter::metadata_gate(
        {v.has_english_asr, v.duration, v.category}, cfg.metadata);
    if (d.accepted() && v.thumbnails) {
      d = vs::filter::thumbnail_gate(*v.thumbnails, cfg.thumbnails);
    }
    std::string reason(vs::filter::reason_name(d.reason()));
    bool accepted = d.accepted();
    if (accepted && !v.group_perplexities.empty() &&
        !vs::denoise::perplexity_gate(v.group_perplexities, cfg.perplexity_threshold)
             .accept) {
      accepted = false;
      reason = vs::pipeline::kHighPerplexity;
    }
    io.emit(with_version({{"video_id", v.video_id},
                          {"verdict", accepted ? "accept" : "reject"},
                          {"reason", reason}}));
  });
  io.finish();
  return status(errors);
}

int cmd_align(const Context& ctx, bool clamp) {
  Streams io(ctx);
  const std::size_t errors = for_each_record(io.in(), [&](const json& j, std::size_t) {
    const auto clean = string_list(j, "clean");
    auto it = j.find("noisy");
    if (it == j.end() || !it->is_array()) {
      throw vs::Error(vs::ErrorKind::kParse, "missing array field noisy");
    }
    std::vector<vs::corpus::TimedWord> timed;
    std::vector<std::string> noisy;
    for (const json& w : *it) {
      if (w.is_string()) {
        noisy.push_back(w.get<std::string>());
      } else {
        timed.push_back(vs::corpus::timed_word_from_json(w));
        noisy.push_back(timed.back().text);
      }
    }
    if (!timed.empty() && timed.size() != noisy.size()) {
      throw vs::Error(vs::ErrorKind::kParse, "noisy mixes timed and plain words");
    }
    std::vector<std::string> nn, cn;
    for (const auto& w : noisy) nn.push_back(vs::text::lowercase_strip_punct(w));
    for (const auto& w : clean) cn.push_back(vs::text::lowercase_strip_punct(w));
    const auto al = vs::align::dtw_align(nn, cn);
    json out{{"pairs", al.pairs}, {"cost", al.total_cost}};
    if (auto id = j.find("id"); id != j.end()) out["id"] = *id;
    if (!timed.empty()) {
      auto words = vs::align::transfer_timing(al, timed, clean);
      if (clamp) vs::align::clamp_overlaps(words);
      json arr = json::array();
      for (const auto& w : words) arr.push_back(vs::corpus::to_json(w));
      out["words"] = std::move(arr);
    }
    io.emit(with_version(std::move(out)));
  });
  io.finish();
  return status(errors);
}

int cmd_corrupt(const Context& ctx, const std::string& dict_path) {
  const auto cfg = ctx.config();
  const auto tok = cfg.make_tokenizer();
  const auto table = dict_path.empty()
                         ? vs::denoise::PronunciationTable()
                         : vs::denoise::PronunciationTable::load_cmudict(dict_path);
  Streams io(ctx);
  const std::size_t errors = for_each_record(io.in(), [&](const json& j, std::size_t line) {
    std::vector<std::string> words;
    if (auto t = j.find("text"); t != j.end() && t->is_string()) {
      words = vs::text::split_whitespace(t->get<std::string>());
    } else {
      words = string_list(j, "words");
    }
    auto c = cfg.corruption;
    const std::string id = record_id(j, line);
    c.rng_seed = vs::derive_seed(cfg.seed, id);
    const auto doc = vs::denoise::corrupt_document(words, c, table, tok);
    io.emit(with_version({{"id", id},
                          {"words", doc.words},
                          {"replacements", doc.replacements},
                          {"homophone_replacements", doc.homophone_replacements},
                          {"fillers", doc.fillers}}));
  });
  io.finish();
  return status(errors);
}

int cmd_segment(const Context& ctx, const std::string& frames_out) {
  const auto cfg = ctx.config();
  const auto tok = cfg.make_tokenizer();
  Streams io(ctx);
  std::ofstream frames;
  if (!frames_out.empty()) {
    frames.open(frames_out, std::ios::binary);
    if (!frames) throw vs::Error(vs::ErrorKind::kIo, "cannot create " + frames_out);
  }
  const std::size_t errors = for_each_record(io.in(), [&](const json& j, std::size_t) {
    const auto raw = vs::pipeline::raw_video_from_json(j);
    if (auto v = vs::corpus::validate_transcript(raw.words); !v.empty()) {
      throw vs::Error(vs::ErrorKind::kParse, v.front().field + ": " + v.front().message);
    }
    auto words = raw.words;
    auto variant = vs::corpus::Variant::kNoisy;
    if (raw.clean_words && !raw.clean_words->empty() && !words.empty()) {
      std::vector<std::string> nn, cn;
      for (const auto& w : words) nn.push_back(vs::text::lowercase_strip_punct(w.text));
      for (const auto& w : *raw.clean_words) cn.push_back(vs::text::lowercase_strip_punct(w));
      words = vs::align::transfer_timing(vs::align::dtw_align(nn, cn), raw.words,
                                         *raw.clean_words);
      vs::align::clamp_overlaps(words);
      variant = vs::corpus::Variant::kClean;
    }
    vs::corpus::VideoRecord rec{raw.video_id, raw.duration, raw.category,
                                raw.has_english_asr, {}};
    rec.segments = vs::segmenter::segment_transcript(
        vs::tokenize_words(words, tok), cfg.tokens_per_segment, variant);
    io.emit(vs::corpus::to_json(rec));
    if (frames.is_open()) {
      for (const auto& f : vs::segmenter::frame_manifest(rec)) {
        frames << json{{"schema_version", vs::corpus::kSchemaVersion},
                       {"video_id", f.video_id},
                       {"frame_time_s", f.frame_time.seconds()}}
                      .dump()
               << '\n';
      }
    }
  });
  io.finish();
  if (frames.is_open() && !frames.flush()) {
    throw vs::Error(vs::ErrorKind::kIo, "write failed: " + frames_out);
  }
  return status(errors);
}

int cmd_pack(const Context& ctx) {
  const auto cfg = ctx.config();
  Streams io(ctx);
  vs::segmenter::SegmentPacker packer(cfg.segments_per_example, cfg.cross_video);
  const std::size_t errors = for_each_record(io.in(), [&](const json& j, std::size_t) {
    const auto rec = vs::corpus::video_record_from_json(j);
    if (auto v = vs::corpus::validate_record(rec, cfg.tokens_per_segment); !v.empty()) {
      throw vs::Error(vs::ErrorKind::kParse, v.front().field + ": " + v.front().message);
    }
    for (const auto& ex : packer.push(rec)) io.emit(vs::corpus::to_json(ex));
  });
  packer.finish();
  io.finish();
  std::cerr << json{{"segments", packer.segments_in()},
                    {"examples", packer.examples_out()},
                    {"dropped_remainder", packer.dropped()}}
                   .dump()
            << "\n";
  return status(errors);
}

int cmd_mask(const Context& ctx) {
  const auto cfg = ctx.config();
  const auto vocab = vs::masking::VocabInfo::from(cfg.make_tokenizer());
  Streams io(ctx);
  const std::size_t errors = for_each_record(io.in(), [&](const json& j, std::size_t line) {
    const auto tokens = number_list<vs::TokenId>(j, "tokens");
    vs::masking::AttentionProfile profile;
    profile.weights = number_list<double>(j, "attention");
    profile.special_positions = number_list<std::size_t>(j, "special_positions", false);
    if (profile.weights.size() != tokens.size()) {
      throw vs::Error(vs::ErrorKind::kShapeMismatch,
                      "attention needs one weight per token");
    }
    const std::string id = record_id(j, line);
    vs::Rng rng(vs::derive_seed(cfg.seed, id));
    const auto plan = vs::masking::select_targets(tokens.size(), profile, rng, cfg.mask);
    const auto masked = vs::masking::apply_plan(tokens, plan, rng, vocab);
    json actions = json::array();
    for (auto a : plan.actions) actions.push_back(vs::masking::action_name(a));
    io.emit(with_version({{"id", id},
                          {"tokens", masked.tokens},
                          {"labels", masked.labels},
                          {"targets", plan.targets},
                          {"actions", std::move(actions)}}));
  });
  io.finish();
  return status(errors);
}

struct LossArgs {
  std::string kind;
  std::string frames, captions, logits, labels;
  bool grads = false;
  bool row_only = false;
  double mlm = 0, contrastive = 0, ordering = 0;
};

json gradients_json(const std::vector<vs::Matrix>& g) {
  json out = json::array();
  for (const auto& m : g) out.push_back(vs::tensor_io::matrix_to_json(m));
  return out;
}

int cmd_loss(const Context& ctx, const LossArgs& a) {
  const auto cfg = ctx.config();
  Streams io(ctx);
  json out{{"kind", a.kind}};
  if (a.kind == "contrastive") {
    const auto rep = vs::objectives::contrastive_loss(
        vs::tensor_io::load_matrix(a.frames), vs::tensor_io::load_matrix(a.captions),
        cfg.temperature, a.grads,
        a.row_only ? vs::objectives::ContrastiveDirection::kRowOnly
                   : vs::objectives::ContrastiveDirection::kSymmetric);
    out["value"] = rep.value;
    if (a.grads) out["gradients"] = gradients_json(rep.gradients);
  } else if (a.kind == "mlm") {
    const json labels = load_json_file(a.labels);
    const auto rep = vs::objectives::masked_lm_loss(
        vs::tensor_io::load_matrix(a.logits), number_list<vs::TokenId>(labels, "labels"),
        a.grads);
    out["value"] = rep.value;
    if (a.grads) out["gradients"] = gradients_json(rep.gradients);
  } else if (a.kind == "ordering") {
    const json j = load_json_file(a.logits);
    std::vector<std::vector<double>> logits;
    try {
      logits = j.at("logits").get<std::vector<std::vector<double>>>();
    } catch (const json::exception& e) {
      throw vs::Error(vs::ErrorKind::kParse, std::string("logits: ") + e.what());
    }
    const auto classes = number_list<std::size_t>(j, "classes");
    const auto rep = vs::objectives::ordering_loss(logits, classes, a.grads);
    out["value"] = rep.value;
    if (a.grads) out["gradients"] = gradients_json(rep.gradients);
  } else if (a.kind == "combine") {
    out["value"] = vs::objectives::combine_losses(a.mlm, a.contrastive, a.ordering,
                                                  cfg.contrastive_coeff);
  } else {
    throw vs::Error(vs::ErrorKind::kInvalidArgument, "unknown loss kind " + a.kind);
  }
  io.emit(with_version(std::move(out)));
  io.finish();
  return kExitOk;
}

json permutation_json(const vs::reorder::Permutation& p) { return p.mapping; }

// Table lines: {"n": n, "log_probs": [...]} with n*n*4 entries, or
// n*n*2 entries plus "classes": 2 for a frame/frame table.
std::variant<vs::reorder::RelationTable, vs::reorder::FrameOrderTable> table_from_json(
    const json& j) {
  auto n = j.find("n");
  if (n == j.end() || !n->is_number_unsigned()) {
    throw vs::Error(vs::ErrorKind::kParse, "missing field n");
  }
  auto lp = number_list<double>(j, "log_probs");
  if (j.value("classes", 4) == 2) {
    return vs::reorder::FrameOrderTable(n->get<std::size_t>(), std::move(lp));
  }
  return vs::reorder::RelationTable(n->get<std::size_t>(), std::move(lp));
}

int cmd_score_order(const Context& ctx) {
  Streams io(ctx);
  const std::size_t errors = for_each_record(io.in(), [&](const json& j, std::size_t) {
    const auto best = std::visit(
        [](const auto& t) { return vs::reorder::best_ordering(t); }, table_from_json(j));
    io.emit(with_version(
        {{"permutation", permutation_json(best.permutation)}, {"score", best.score}}));
  });
  io.finish();
  return status(errors);
}

std::vector<json> read_lines(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw vs::Error(vs::ErrorKind::kIo, "cannot open " + path);
  std::vector<json> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(f, line)) {
    ++n;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(json::parse(line));
    } catch (const json::exception& e) {
      throw vs::Error(vs::ErrorKind::kParse,
                      path + ":" + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

int cmd_eval_story(const Context& ctx, const std::string& tables_path,
                   const std::string& truths_path, bool footrule_sum) {
  std::vector<vs::reorder::RelationTable> tables;
  for (const json& j : read_lines(tables_path)) {
    auto t = table_from_json(j);
    if (!std::holds_alternative<vs::reorder::RelationTable>(t)) {
      throw vs::Error(vs::ErrorKind::kInvalidArgument,
                      "eval-story expects caption/frame tables");
    }
    tables.push_back(std::get<vs::reorder::RelationTable>(std::move(t)));
  }
  std::vector<vs::reorder::Permutation> truths;
  for (const json& j : read_lines(truths_path)) {
    truths.push_back({number_list<std::size_t>(j, "permutation")});
  }
  const auto r = vs::reorder::evaluate_story_set(tables, truths, {footrule_sum}, ctx.jobs);
  Streams io(ctx);
  io.emit(with_version({{"spearman", r.spearman},
                        {"pairwise_accuracy", r.pairwise_accuracy},
                        {"distance", r.distance},
                        {"n_stories", r.n_stories}}));
  io.finish();
  return kExitOk;
}

int cmd_shape(const Context& ctx) {
  auto cfg = ctx.config();
  const auto s = vs::segmenter::sequence_shape(cfg.shape);
  Streams io(ctx);
  io.emit(with_version({{"cells_per_frame", s.cells_per_frame},
                        {"visual_tokens_per_frame", s.visual_tokens_per_frame},
                        {"joint_sequence_length", s.joint_sequence_length},
                        {"language_only_length", s.language_only_length}}));
  io.finish();
  return kExitOk;
}

int cmd_selfcheck(const Context& ctx) {
  // Shape and temperature come straight from flags here, unvalidated, so a
  // misconfigured value shows up as a failed check rather than a flag error.
  json flags = json::object();
  for (const auto& apply : ctx.overrides) apply(flags);
  vs::pipeline::SelfcheckOptions opts;
  opts.shape.patch = flags.value("patch", opts.shape.patch);
  opts.shape.pool = flags.value("pool", opts.shape.pool);
  opts.shape.image_width = flags.value("image_width", opts.shape.image_width);
  opts.shape.image_height = flags.value("image_height", opts.shape.image_height);
  opts.temperature = flags.value("temperature", opts.temperature);
  opts.seed = flags.value("seed", opts.seed);
  bool ok = true;
  for (const auto& c : vs::pipeline::selfcheck(opts)) {
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << "\n";
    ok = ok && c.passed;
  }
  std::cout << (ok ? "selfcheck passed" : "selfcheck FAILED") << "\n";
  return ok ? kExitOk : kExitDataErrors;
}

int cmd_run(const Context& ctx, const std::string& manifest_path) {
  const auto cfg = ctx.config();
  Streams io(ctx);
  const auto result = vs::pipeline::run_pipeline(cfg, io.in(), io.out(), ctx.jobs);
  io.finish();
  for (const auto& e : result.errors) std::cerr << e << "\n";
  const std::string manifest = result.manifest.to_json().dump(2) + "\n";
  if (manifest_path.empty()) {
    std::cerr << manifest;
  } else {
    std::ofstream f(manifest_path, std::ios::binary);
    if (!(f << manifest)) throw vs::Error(vs::ErrorKind::kIo, "cannot write " + manifest_path);
  }
  return status(result.manifest.parse_errors);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vidscript: video-transcript corpus preparation and objectives"};
  app.require_subcommand(1);
  Context ctx;
  app.add_option("--config", ctx.config_path, "JSON config; flags take precedence");
  config_option<std::uint64_t>(&app, ctx, "--seed", "seed", "global seed");
  app.add_option("--jobs,-j", ctx.jobs, "worker threads")->check(CLI::PositiveNumber);

  auto* filter = app.add_subcommand("filter", "metadata, thumbnail and perplexity gates");
  io_options(filter, ctx);
  config_option<double>(filter, ctx, "--max-duration", "max_duration_s", "seconds");
  config_option<std::vector<std::string>>(filter, ctx, "--exclude-category",
                                          "excluded_categories", "excluded categories");
  config_option<double>(filter, ctx, "--object-prob", "object_prob_threshold",
                        "object presence threshold");
  config_option<std::size_t>(filter, ctx, "--min-objects", "min_objects", "");
  config_option<double>(filter, ctx, "--max-similarity", "similarity_threshold", "");
  config_flag(filter, ctx, "--distinct-classes", "distinct_classes", true,
              "count distinct object classes");
  config_option<double>(filter, ctx, "--max-perplexity", "perplexity_threshold", "");

  auto* align = app.add_subcommand("align", "align noisy and clean transcripts");
  io_options(align, ctx);
  bool clamp = false;
  align->add_flag("--clamp", clamp, "clamp overlapping transferred timings");

  auto* corrupt = app.add_subcommand("corrupt", "synthesize ASR-like noise");
  io_options(corrupt, ctx);
  tokenizer_options(corrupt, ctx);
  std::string dict_path;
  corrupt->add_option("--pronounce-dict", dict_path, "CMU dictionary file");
  config_option<double>(corrupt, ctx, "--replace-prob", "replace_prob", "");
  config_option<double>(corrupt, ctx, "--homophone-share", "homophone_share", "");
  config_option<double>(corrupt, ctx, "--filler-prob", "filler_prob", "");

  auto* segment = app.add_subcommand("segment", "split transcripts into segments");
  io_options(segment, ctx);
  tokenizer_options(segment, ctx);
  std::string frames_out;
  segment->add_option("--frames-out", frames_out, "frame extraction manifest");
  config_option<std::size_t>(segment, ctx, "--tokens-per-segment,-L",
                             "tokens_per_segment", "");

  auto* pack = app.add_subcommand("pack", "pack segments into examples");
  io_options(pack, ctx);
  config_option<std::size_t>(pack, ctx, "--segments-per-example,-n",
                             "segments_per_example", "");
  config_option<std::size_t>(pack, ctx, "--tokens-per-segment,-L",
                             "tokens_per_segment", "");
  config_flag(pack, ctx, "--no-cross-video", "cross_video", false,
              "never merge segments of different videos");

  auto* mask = app.add_subcommand("mask", "attention-guided span masking");
  io_options(mask, ctx);
  tokenizer_options(mask, ctx);
  config_option<double>(mask, ctx, "--rate", "mask_rate", "");
  config_option<double>(mask, ctx, "--attended-share", "attended_share", "");
  config_option<double>(mask, ctx, "--top-frac", "top_frac", "");
  config_option<double>(mask, ctx, "--span-mean", "span_mean", "");
  config_option<double>(mask, ctx, "--mask-token-prob", "mask_token_prob", "");
  config_option<double>(mask, ctx, "--random-token-prob", "random_token_prob", "");

  auto* loss = app.add_subcommand("loss", "evaluate a training loss");
  io_options(loss, ctx);
  LossArgs la;
  loss->add_option("kind", la.kind, "contrastive | mlm | ordering | combine")
      ->required()
      ->check(CLI::IsMember({"contrastive", "mlm", "ordering", "combine"}));
  loss->add_option("--frames", la.frames, "frame embeddings (.json or container)");
  loss->add_option("--captions", la.captions, "caption embeddings");
  loss->add_option("--logits", la.logits, "logits matrix, or ordering JSON");
  loss->add_option("--labels", la.labels, "JSON file with a labels array");
  loss->add_flag("--grads", la.grads, "also report gradients");
  loss->add_flag("--row-only", la.row_only, "frame-to-caption direction only");
  loss->add_option("--mlm", la.mlm, "");
  loss->add_option("--contrastive", la.contrastive, "");
  loss->add_option("--ordering", la.ordering, "");
  config_option<double>(loss, ctx, "--tau", "temperature", "");
  config_option<double>(loss, ctx, "--coeff", "contrastive_coeff", "");

  auto* score = app.add_subcommand("score-order", "best ordering for each table");
  io_options(score, ctx);

  auto* eval = app.add_subcommand("eval-story", "story ordering metrics");
  std::string tables_path, truths_path;
  bool footrule_sum = false;
  eval->add_option("--tables", tables_path)->required();
  eval->add_option("--truths", truths_path)->required();
  eval->add_option("--out,-o", ctx.out_path);
  eval->add_flag("--footrule-sum", footrule_sum, "summed displacement");

  auto* shape = app.add_subcommand("shape", "sequence shape arithmetic");
  shape->add_option("--out,-o", ctx.out_path);
  auto* selfcheck = app.add_subcommand("selfcheck", "run embedded checks");
  for (auto* sub : {shape, selfcheck}) {
    config_option<std::size_t>(sub, ctx, "--width", "image_width", "");
    config_option<std::size_t>(sub, ctx, "--height", "image_height", "");
    config_option<std::size_t>(sub, ctx, "--patch", "patch", "");
    config_option<std::size_t>(sub, ctx, "--pool", "pool", "");
  }
  config_option<double>(selfcheck, ctx, "--tau", "temperature", "");

  auto* run = app.add_subcommand("run", "full pipeline: filter, segment, pack");
  io_options(run, ctx);
  tokenizer_options(run, ctx);
  std::string manifest_path;
  run->add_option("--manifest", manifest_path, "manifest output (default stderr)");
  config_option<std::size_t>(run, ctx, "--segments-per-example,-n",
                             "segments_per_example", "");
  config_option<std::size_t>(run, ctx, "--tokens-per-segment,-L",
                             "tokens_per_segment", "");
  config_flag(run, ctx, "--no-cross-video", "cross_video", false, "");
  config_option<double>(run, ctx, "--max-duration", "max_duration_s", "");

  CLI11_PARSE(app, argc, argv);

  try {
    if (filter->parsed()) return cmd_filter(ctx);
    if (align->parsed()) return cmd_align(ctx, clamp);
    if (corrupt->parsed()) return cmd_corrupt(ctx, dict_path);
    if (segment->parsed()) return cmd_segment(ctx, frames_out);
    if (pack->parsed()) return cmd_pack(ctx);
    if (mask->parsed()) return cmd_mask(ctx);
    if (loss->parsed()) return cmd_loss(ctx, la);
    if (score->parsed()) return cmd_score_order(ctx);
    if (eval->parsed()) return cmd_eval_story(ctx, tables_path, truths_path, footrule_sum);
    if (shape->parsed()) return cmd_shape(ctx);
    if (selfcheck->parsed()) return cmd_selfcheck(ctx);
    if (run->parsed()) return cmd_run(ctx, manifest_path);
  } catch (const vs::Error& e) {
    std::cerr << "vidscript: " << vs::error_kind_name(e.kind()) << ": " << e.what()
              << "\n";
    return kExitFatal;
  } catch (const std::exception& e) {
    std::cerr << "vidscript: " << e.what() << "\n";
    return kExitFatal;
  }
  return kExitFatal;
}

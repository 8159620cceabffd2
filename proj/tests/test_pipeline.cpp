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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>
#include <string>

#include "vidscript/pipeline.hpp"

using namespace vidscript;
using namespace vidscript::pipeline;
using nlohmann::json;

namespace {

json video(const std::string& id, double duration, std::size_t n_words,
           const std::string& category = "Education", bool asr = true) {
  json words = json::array();
  for (std::size_t k = 0; k < n_words; ++k) {
    words.push_back({{"text", "w" + std::to_string(k % 7)},
                     {"start_s", 0.5 * k},
                     {"end_s", 0.5 * k + 0.4}});
  }
  return {{"video_id", id},
          {"duration_s", duration},
          {"category", category},
          {"has_english_asr", asr},
          {"words", words}};
}

RunResult run(const PipelineConfig& cfg, const std::string& input, std::size_t jobs,
              std::string* output = nullptr) {
  std::istringstream in(input);
  std::ostringstream out;
  RunResult r = run_pipeline(cfg, in, out, jobs);
  if (output) *output = out.str();
  return r;
}

void check_conservation(const Manifest& m) {
  CHECK(m.inputs == m.accepted + m.rejected_total());
  CHECK(m.lines == m.inputs + m.parse_errors);
}

}  // namespace

TEST_CASE("empty input") {
  std::string out;
  const auto r = run(PipelineConfig(), "", 1, &out);
  CHECK(out.empty());
  CHECK(r.manifest.lines == 0);
  CHECK(r.manifest.accepted == 0);
  CHECK(r.manifest.examples == 0);
  CHECK(r.manifest.rejected_total() == 0);
  CHECK(r.manifest.rejected.count("too_long") == 1);
  CHECK(r.manifest.rejected.count(kHighPerplexity) == 1);
  check_conservation(r.manifest);
}

TEST_CASE("a single over-long video is rejected") {
  std::string out;
  const auto r = run(PipelineConfig(), video("v", 1300, 10).dump() + "\n", 1, &out);
  CHECK(r.manifest.rejected.at("too_long") == 1);
  CHECK(r.manifest.accepted == 0);
  CHECK(r.manifest.examples == 0);
  CHECK(out.empty());
  check_conservation(r.manifest);
}

TEST_CASE("parse errors are counted and reported by line") {
  std::string input = video("a", 60, 10).dump() + "\n";
  input += "{not json\n\n";
  input += json{{"video_id", "b"}}.dump() + "\n";
  input += video("c", 60, 10, "Gaming").dump() + "\n";
  input += video("d", 60, 10, "News", false).dump() + "\n";
  const auto r = run(PipelineConfig(), input, 2);
  CHECK(r.manifest.lines == 5);
  CHECK(r.manifest.parse_errors == 2);
  CHECK(r.manifest.accepted == 1);
  CHECK(r.manifest.rejected.at("gaming_category") == 1);
  CHECK(r.manifest.rejected.at("no_asr") == 1);
  REQUIRE(r.errors.size() == 2);
  CHECK(r.errors[0].rfind("line 2:", 0) == 0);
  CHECK(r.errors[1].rfind("line 4:", 0) == 0);
  check_conservation(r.manifest);
}

TEST_CASE("perplexity gate and missing evidence") {
  json v = video("p", 60, 10);
  v["group_perplexities"] = {10.0, 500.0};
  const auto r = run(PipelineConfig(), v.dump() + "\n", 1);
  CHECK(r.manifest.rejected.at(kHighPerplexity) == 1);
  v["group_perplexities"] = {10.0, 20.0};
  CHECK(run(PipelineConfig(), v.dump() + "\n", 1).manifest.accepted == 1);
}

TEST_CASE("output is stable across worker counts") {
  std::string input;
  for (int k = 0; k < 40; ++k) {
    input += video("v" + std::to_string(k), 30 + k, 50 + 13 * k,
                   k % 9 == 4 ? "Gaming" : "Howto")
                 .dump() +
             "\n";
  }
  PipelineConfig cfg;
  cfg.segments_per_example = 4;
  std::string one;
  const auto r1 = run(cfg, input, 1, &one);
  CHECK(r1.manifest.examples > 0);
  check_conservation(r1.manifest);
  for (std::size_t jobs : {2u, 4u, 8u}) {
    std::string got;
    const auto r = run(cfg, input, jobs, &got);
    CHECK(got == one);
    CHECK(r.manifest.to_json() == r1.manifest.to_json());
  }
  // Every output line is a packed example of the requested size.
  std::istringstream lines(one);
  std::string line;
  std::size_t n = 0;
  while (std::getline(lines, line)) {
    const json ex = json::parse(line);
    CHECK(ex.at("schema_version") == 1);
    ++n;
  }
  CHECK(n == r1.manifest.examples);
  CHECK(r1.manifest.segments == r1.manifest.examples * 4 + r1.manifest.dropped_remainder);
}

TEST_CASE("config overlay and validation") {
  PipelineConfig base;
  base.seed = 5;
  const auto cfg = PipelineConfig::from_json(json{{"tokens_per_segment", 16}}, base);
  CHECK(cfg.tokens_per_segment == 16);
  CHECK(cfg.seed == 5);
  CHECK_THROWS_AS(PipelineConfig::from_json(json{{"no_such_key", 1}}), Error);
  CHECK_THROWS_AS(PipelineConfig::from_json(json{{"mask_rate", 2.0}}).validate(), Error);
  CHECK_THROWS_AS(PipelineConfig::from_json(json{{"temperature", 0}}).validate(), Error);
  CHECK_THROWS_AS(PipelineConfig::from_json(json{{"mask_rate", "high"}}), Error);

  const auto round = PipelineConfig::from_json(cfg.to_json());
  CHECK(round.to_json() == cfg.to_json());
  CHECK(round.hash() == cfg.hash());
  CHECK(PipelineConfig().hash() == PipelineConfig().hash());
  CHECK(cfg.hash() != PipelineConfig().hash());
}

TEST_CASE("raw video round trip") {
  json v = video("r", 12.5, 3);
  v["clean_words"] = {"w0", "w1", "w2"};
  v["group_perplexities"] = {1.5};
  const RawVideo raw = raw_video_from_json(v);
  CHECK(raw.words.size() == 3);
  CHECK(raw.duration.count == 12500);
  const RawVideo again = raw_video_from_json(to_json(raw));
  CHECK(again.video_id == "r");
  CHECK(again.clean_words == raw.clean_words);
  CHECK(again.group_perplexities == raw.group_perplexities);
  CHECK_THROWS_AS(raw_video_from_json(json{{"video_id", "x"}}), Error);
  json bad = v;
  bad["schema_version"] = 99;
  CHECK_THROWS_AS(raw_video_from_json(bad), Error);
}

TEST_CASE("selfcheck") {
  for (const auto& c : selfcheck()) {
    INFO(c.name << ": " << c.detail);
    CHECK(c.passed);
  }
  SelfcheckOptions hot;
  hot.temperature = 0;
  bool saw = false;
  for (const auto& c : selfcheck(hot)) {
    if (!c.passed && c.detail.find("divided") != std::string::npos) saw = true;
  }
  CHECK(saw);
  SelfcheckOptions odd;
  odd.shape.patch = 17;
  saw = false;
  for (const auto& c : selfcheck(odd)) {
    if (!c.passed && c.detail.find("divisibility") != std::string::npos) saw = true;
  }
  CHECK(saw);
}

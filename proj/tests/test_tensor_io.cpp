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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "vidscript/tensor_io.hpp"

using namespace vidscript;
using namespace vidscript::tensor_io;

namespace {

std::string encode(const std::vector<Tensor>& ts) {
  std::ostringstream out;
  write(out, ts);
  return out.str();
}

std::vector<Tensor> decode(const std::string& bytes) {
  std::istringstream in(bytes);
  return read(in);
}

}  // namespace

TEST_CASE("round trip") {
  Tensor a{DType::kFloat64, {2, 3}, {1, -2.5, 3e300, 0, -0.0, 1e-310}};
  Tensor b{DType::kFloat32, {4}, {0.5, 1, -8, 1024}};
  Tensor scalar{DType::kFloat64, {}, {7}};
  const std::vector<Tensor> ts{a, b, scalar};
  CHECK(decode(encode(ts)) == ts);
  CHECK(decode(encode({})).empty());
  CHECK(scalar.element_count() == 1);
}

TEST_CASE("float32 narrows values") {
  Tensor t{DType::kFloat32, {1}, {0.1}};
  const auto back = decode(encode({t}));
  CHECK(back[0].values[0] == static_cast<double>(0.1f));
}

TEST_CASE("layout is little-endian with a fixed header") {
  const std::string bytes = encode({Tensor{DType::kFloat64, {1}, {1.0}}});
  // magic, version, count, width+pad, ndim, one dim, one value.
  REQUIRE(bytes.size() == 4 + 4 + 4 + 4 + 4 + 8 + 8);
  CHECK(bytes.substr(0, 4) == "VSTN");
  CHECK(static_cast<unsigned char>(bytes[4]) == 1);
  CHECK(static_cast<unsigned char>(bytes[8]) == 1);
  CHECK(static_cast<unsigned char>(bytes[12]) == 8);
  // 1.0 = 0x3FF0000000000000, little-endian.
  CHECK(static_cast<unsigned char>(bytes.back()) == 0x3F);
  CHECK(static_cast<unsigned char>(bytes[bytes.size() - 2]) == 0xF0);
}

TEST_CASE("corrupt input is rejected") {
  const std::string good = encode({Tensor{DType::kFloat64, {2, 2}, {1, 2, 3, 4}}});
  for (std::size_t cut = 0; cut < good.size(); ++cut) {
    CHECK_THROWS_AS(decode(good.substr(0, cut)), Error);
  }
  std::string bad = good;
  bad[0] = 'X';
  CHECK_THROWS_AS(decode(bad), Error);
  bad = good;
  bad[4] = 2;
  CHECK_THROWS_AS(decode(bad), Error);
  bad = good;
  bad[12] = 3;
  CHECK_THROWS_AS(decode(bad), Error);
  CHECK_THROWS_AS(write_file("/nonexistent-dir/x.vstn", {}), Error);
  CHECK_THROWS_AS(read_file("/nonexistent-dir/x.vstn"), Error);
  // Shape/value mismatch on write.
  std::ostringstream out;
  CHECK_THROWS_AS(write(out, {Tensor{DType::kFloat64, {3}, {1}}}), Error);
}

TEST_CASE("matrix conversions") {
  const Matrix m{{1, 2, 3}, {4, 5, 6}};
  CHECK(to_matrix(from_matrix(m)) == m);
  CHECK(to_matrix(Tensor{DType::kFloat64, {3}, {1, 2, 3}}) == Matrix{{1, 2, 3}});
  CHECK_THROWS_AS(to_matrix(Tensor{DType::kFloat64, {1, 1, 1}, {1}}), Error);
  CHECK(matrix_from_json(matrix_to_json(m)) == m);
  CHECK(matrix_to_json(m).dump() == "[[1.0,2.0,3.0],[4.0,5.0,6.0]]");
  CHECK_THROWS_AS(matrix_from_json(nlohmann::json::parse("[[1,2],[3]]")), Error);
  CHECK_THROWS_AS(matrix_from_json(nlohmann::json::parse("[[1,\"a\"]]")), Error);
}

TEST_CASE("load_matrix from files") {
  const auto dir = std::filesystem::temp_directory_path() / "vidscript_tensor_io_test";
  std::filesystem::create_directories(dir);
  const Matrix m{{0.25, -1}, {3, 4}};
  write_file(dir / "m.vstn", {from_matrix(m)});
  CHECK(load_matrix(dir / "m.vstn") == m);
  {
    std::ofstream(dir / "m.json") << matrix_to_json(m).dump();
  }
  CHECK(load_matrix(dir / "m.json") == m);
  std::filesystem::remove_all(dir);
}

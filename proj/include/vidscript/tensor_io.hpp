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

// A small binary container for float tensors.
//
// Layout, all integers little-endian:
//   "VSTN"  u32 version (1)  u32 tensor count
//   per tensor:
//     u8 bytes per element (4 = float32, 8 = float64), 3 zero bytes
//     u32 ndim, then ndim x u64 dims
//     prod(dims) elements, little-endian IEEE-754
// Values are always held as double in memory.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "json.hpp"
#include "vidscript/matrix.hpp"

namespace vidscript::tensor_io {

inline constexpr std::uint32_t kVersion = 1;

enum class DType : std::uint8_t { kFloat32 = 4, kFloat64 = 8 };

struct Tensor {
  DType dtype = DType::kFloat64;
  std::vector<std::uint64_t> dims;
  std::vector<double> values;

  std::uint64_t element_count() const;
  bool operator==(const Tensor&) const = default;
};

void write(std::ostream& out, const std::vector<Tensor>& tensors);
std::vector<Tensor> read(std::istream& in);

void write_file(const std::filesystem::path& path,
                const std::vector<Tensor>& tensors);
std::vector<Tensor> read_file(const std::filesystem::path& path);

// Rank-2 views. A rank-1 tensor reads as a single row.
Matrix to_matrix(const Tensor& t);
Tensor from_matrix(const Matrix& m, DType dtype = DType::kFloat64);

// [[...], [...]] -> Matrix; rows must have equal length.
Matrix matrix_from_json(const nlohmann::json& j);
nlohmann::json matrix_to_json(const Matrix& m);

// Loads a matrix from either format: ".json" files hold one nested array,
// anything else is read as a container and its first tensor is used.
Matrix load_matrix(const std::filesystem::path& path);

}  // namespace vidscript::tensor_io

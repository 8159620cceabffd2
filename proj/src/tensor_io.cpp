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

#include "vidscript/tensor_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>

namespace vidscript::tensor_io {

namespace {

constexpr char kMagic[4] = {'V', 'S', 'T', 'N'};
// Guards against absurd headers before allocating.
constexpr std::uint64_t kMaxElements = std::uint64_t{1} << 32;
constexpr std::uint32_t kMaxRank = 8;

void put_le(std::ostream& out, std::uint64_t v, int bytes) {
  for (int k = 0; k < bytes; ++k) {
    out.put(static_cast<char>((v >> (8 * k)) & 0xff));
  }
}

std::uint64_t get_le(std::istream& in, int bytes) {
  unsigned char buf[8];
  in.read(reinterpret_cast<char*>(buf), bytes);
  if (in.gcount() != bytes) {
    throw Error(ErrorKind::kParse, "tensor container truncated");
  }
  std::uint64_t v = 0;
  for (int k = bytes - 1; k >= 0; --k) v = (v << 8) | buf[k];
  return v;
}

}  // namespace

std::uint64_t Tensor::element_count() const {
  std::uint64_t n = 1;
  for (std::uint64_t d : dims) n *= d;
  return n;
}

void write(std::ostream& out, const std::vector<Tensor>& tensors) {
  out.write(kMagic, 4);
  put_le(out, kVersion, 4);
  put_le(out, tensors.size(), 4);
  for (const Tensor& t : tensors) {
    if (t.values.size() != t.element_count()) {
      throw Error(ErrorKind::kShapeMismatch,
                  "tensor value count does not match its dims");
    }
    put_le(out, static_cast<std::uint8_t>(t.dtype), 1);
    put_le(out, 0, 3);
    put_le(out, t.dims.size(), 4);
    for (std::uint64_t d : t.dims) put_le(out, d, 8);
    for (double v : t.values) {
      if (t.dtype == DType::kFloat32) {
        put_le(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)), 4);
      } else {
        put_le(out, std::bit_cast<std::uint64_t>(v), 8);
      }
    }
  }
  if (!out) throw Error(ErrorKind::kIo, "tensor write failed");
}

std::vector<Tensor> read(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (in.gcount() != 4 || std::memcmp(magic, kMagic, 4) != 0) {
    throw Error(ErrorKind::kParse, "not a tensor container (bad magic)");
  }
  const auto version = get_le(in, 4);
  if (version != kVersion) {
    throw Error(ErrorKind::kParse,
                "unsupported tensor container version " + std::to_string(version));
  }
  const auto count = get_le(in, 4);
  std::vector<Tensor> out;
  for (std::uint64_t i = 0; i < count; ++i) {
    Tensor t;
    const auto width = get_le(in, 1);
    if (width != 4 && width != 8) {
      throw Error(ErrorKind::kParse, "bad element width " + std::to_string(width));
    }
    t.dtype = static_cast<DType>(width);
    get_le(in, 3);
    const auto ndim = get_le(in, 4);
    if (ndim > kMaxRank) throw Error(ErrorKind::kParse, "tensor rank too large");
    std::uint64_t n = 1;
    for (std::uint64_t k = 0; k < ndim; ++k) {
      t.dims.push_back(get_le(in, 8));
      if (t.dims.back() != 0 && n > kMaxElements / t.dims.back()) {
        throw Error(ErrorKind::kParse, "tensor too large");
      }
      n *= t.dims.back();
    }
    t.values.reserve(n);
    for (std::uint64_t k = 0; k < n; ++k) {
      if (width == 4) {
        t.values.push_back(std::bit_cast<float>(
            static_cast<std::uint32_t>(get_le(in, 4))));
      } else {
        t.values.push_back(std::bit_cast<double>(get_le(in, 8)));
      }
    }
    out.push_back(std::move(t));
  }
  return out;
}

void write_file(const std::filesystem::path& path,
                const std::vector<Tensor>& tensors) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  write(out, tensors);
}

std::vector<Tensor> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  return read(in);
}

Matrix to_matrix(const Tensor& t) {
  if (t.dims.size() == 1) return Matrix(1, t.dims[0], t.values);
  if (t.dims.size() != 2) {
    throw Error(ErrorKind::kShapeMismatch,
                "expected a rank-2 tensor, got rank " +
                    std::to_string(t.dims.size()));
  }
  return Matrix(t.dims[0], t.dims[1], t.values);
}

Tensor from_matrix(const Matrix& m, DType dtype) {
  Tensor t;
  t.dtype = dtype;
  t.dims = {m.rows(), m.cols()};
  t.values.assign(m.data().begin(), m.data().end());
  return t;
}

Matrix matrix_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw Error(ErrorKind::kParse, "matrix is not an array");
  std::size_t cols = 0;
  std::vector<double> data;
  for (std::size_t r = 0; r < j.size(); ++r) {
    const auto& row = j[r];
    if (!row.is_array()) throw Error(ErrorKind::kParse, "matrix row is not an array");
    if (r == 0) cols = row.size();
    if (row.size() != cols) {
      throw Error(ErrorKind::kShapeMismatch, "ragged matrix rows");
    }
    for (const auto& v : row) {
      if (!v.is_number()) throw Error(ErrorKind::kParse, "non-numeric matrix entry");
      data.push_back(v.get<double>());
    }
  }
  return Matrix(j.size(), cols, std::move(data));
}

nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json out = nlohmann::json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    out.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return out;
}

Matrix load_matrix(const std::filesystem::path& path) {
  if (path.extension() == ".json") {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorKind::kParse, path.string() + ": " + e.what());
    }
    return matrix_from_json(j);
  }
  auto tensors = read_file(path);
  if (tensors.empty()) throw Error(ErrorKind::kEmptyInput, "container holds no tensors");
  return to_matrix(tensors.front());
}

}  // namespace vidscript::tensor_io

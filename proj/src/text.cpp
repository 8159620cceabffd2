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

#include "vidscript/text.hpp"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <cstdint>

namespace vidscript::text {

std::u32string to_code_points(std::string_view utf8) {
  std::u32string out;
  out.reserve(utf8.size());
  const auto* s = reinterpret_cast<const std::uint8_t*>(utf8.data());
  const std::int32_t len = static_cast<std::int32_t>(utf8.size());
  std::int32_t i = 0;
  while (i < len) {
    UChar32 c;
    U8_NEXT(s, i, len, c);
    out.push_back(c < 0 ? U'�' : static_cast<char32_t>(c));
  }
  return out;
}

std::string to_utf8(std::u32string_view code_points) {
  std::string out;
  out.reserve(code_points.size());
  for (char32_t c : code_points) {
    std::uint8_t buf[U8_MAX_LENGTH];
    std::int32_t n = 0;
    UBool err = false;
    U8_APPEND(buf, n, U8_MAX_LENGTH, static_cast<UChar32>(c), err);
    if (err) continue;
    out.append(reinterpret_cast<const char*>(buf), n);
  }
  return out;
}

bool is_valid_utf8(std::string_view bytes) {
  const auto* s = reinterpret_cast<const std::uint8_t*>(bytes.data());
  const std::int32_t len = static_cast<std::int32_t>(bytes.size());
  std::int32_t i = 0;
  while (i < len) {
    UChar32 c;
    U8_NEXT(s, i, len, c);
    if (c < 0) return false;
  }
  return true;
}

std::string lowercase_strip_punct(std::string_view word) {
  std::u32string kept;
  for (char32_t c : to_code_points(word)) {
    const auto uc = static_cast<UChar32>(c);
    if (u_ispunct(uc)) continue;
    kept.push_back(static_cast<char32_t>(u_tolower(uc)));
  }
  return to_utf8(kept);
}

std::string to_lower(std::string_view s) {
  std::u32string cps = to_code_points(s);
  for (char32_t& c : cps) {
    c = static_cast<char32_t>(u_tolower(static_cast<UChar32>(c)));
  }
  return to_utf8(cps);
}

std::vector<std::string> split_whitespace(std::string_view s) {
  std::vector<std::string> out;
  std::u32string cur;
  for (char32_t c : to_code_points(s)) {
    if (u_isUWhiteSpace(static_cast<UChar32>(c))) {
      if (!cur.empty()) out.push_back(to_utf8(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(to_utf8(cur));
  return out;
}

}  // namespace vidscript::text

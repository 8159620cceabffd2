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

#include <string>
#include <string_view>
#include <vector>

namespace vidscript::text {

// Malformed sequences decode to U+FFFD.
std::u32string to_code_points(std::string_view utf8);
std::string to_utf8(std::u32string_view code_points);
bool is_valid_utf8(std::string_view bytes);

// Lowercases and drops every code point in the Unicode punctuation
// categories (Pc, Pd, Ps, Pe, Pi, Pf, Po).
std::string lowercase_strip_punct(std::string_view word);

// Unicode simple lowercase mapping, nothing else.
std::string to_lower(std::string_view s);

// Splits on ASCII and Unicode whitespace; empty pieces are dropped.
std::vector<std::string> split_whitespace(std::string_view s);

}  // namespace vidscript::text

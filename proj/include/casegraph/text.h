// Copyright 2026 The CaseGraph Authors.
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

#ifndef CASEGRAPH_TEXT_H_
#define CASEGRAPH_TEXT_H_

#include <cstddef>
#include <string>
#include <string_view>

// UTF-8 helpers. All character offsets in this project count Unicode scalar
// values (code points), never bytes, so most text processing runs on
// std::u32string.

namespace casegraph::text {

// Decodes UTF-8. Invalid sequences decode to U+FFFD, one per offending byte,
// so decoding never fails.
std::u32string Decode(std::string_view utf8);
std::string Encode(std::u32string_view text);
std::string Encode(char32_t c);

// Number of code points in a UTF-8 string.
std::size_t Length(std::string_view utf8);

// Code-point substring [start, end) of a UTF-8 string.
std::string Substr(std::string_view utf8, std::size_t start, std::size_t end);

bool IsSpace(char32_t c);
bool IsAlnum(char32_t c);
bool IsDigit(char32_t c);
bool IsUpper(char32_t c);
bool IsPunct(char32_t c);

char32_t ToLower(char32_t c);
std::u32string ToLower(std::u32string_view s);
std::string ToLower(std::string_view utf8);

// Maps Latin letters with diacritics to their ASCII base. Ligatures such as
// "æ" and "ß" expand to two letters.
std::u32string FoldAscii(std::u32string_view s);

// Lowercases, trims and collapses runs of whitespace to one space.
std::string NormalizeLabel(std::string_view utf8);

std::string Trim(std::string_view s);

}  // namespace casegraph::text

#endif  // CASEGRAPH_TEXT_H_

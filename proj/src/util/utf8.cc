//
// Copyright 2025 The IEForge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "util/utf8.h"

namespace ieforge {

size_t Utf8Length(std::string_view s) {
  size_t n = 0;
  for (unsigned char b : s) {
    if (!IsUtf8Continuation(b)) ++n;
  }
  return n;
}

size_t CharToByte(std::string_view s, size_t char_index) {
  size_t chars = 0;
  for (size_t i = 0; i < s.size(); ++i) {
    if (IsUtf8Continuation(static_cast<unsigned char>(s[i]))) continue;
    if (chars == char_index) return i;
    ++chars;
  }
  if (chars == char_index) return s.size();
  return std::string_view::npos;
}

size_t ByteToChar(std::string_view s, size_t byte_offset) {
  if (byte_offset > s.size()) return std::string_view::npos;
  if (byte_offset < s.size() &&
      IsUtf8Continuation(static_cast<unsigned char>(s[byte_offset]))) {
    return std::string_view::npos;
  }
  size_t chars = 0;
  for (size_t i = 0; i < byte_offset; ++i) {
    if (!IsUtf8Continuation(static_cast<unsigned char>(s[i]))) ++chars;
  }
  return chars;
}

std::vector<std::pair<size_t, size_t>> CodepointRanges(std::string_view s) {
  std::vector<std::pair<size_t, size_t>> out;
  size_t i = 0;
  while (i < s.size()) {
    size_t j = i + 1;
    while (j < s.size() && IsUtf8Continuation(static_cast<unsigned char>(s[j]))) ++j;
    out.emplace_back(i, j);
    i = j;
  }
  return out;
}

bool IsBoundary(std::string_view s, size_t byte_offset) {
  if (byte_offset > s.size()) return false;
  if (byte_offset == s.size()) return true;
  return !IsUtf8Continuation(static_cast<unsigned char>(s[byte_offset]));
}

}  // namespace ieforge

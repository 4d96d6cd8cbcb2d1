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

#ifndef IEFORGE_UTIL_UTF8_H_
#define IEFORGE_UTIL_UTF8_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace ieforge {

inline bool IsUtf8Continuation(unsigned char b) { return (b & 0xC0) == 0x80; }

// Number of codepoints in a UTF-8 string.
size_t Utf8Length(std::string_view s);

// Byte offset of the codepoint with the given character index.
// char_index == Utf8Length(s) maps to s.size(). Returns npos when the index
// is out of range.
size_t CharToByte(std::string_view s, size_t char_index);

// Character index of the codepoint starting at the given byte offset.
// Returns npos when the offset is out of range or not a codepoint boundary.
size_t ByteToChar(std::string_view s, size_t byte_offset);

// Byte ranges [begin, end) of each codepoint.
std::vector<std::pair<size_t, size_t>> CodepointRanges(std::string_view s);

// True when every byte sequence forms a well-formed codepoint boundary chain
// (no validation of overlong encodings; cheap structural check).
bool IsBoundary(std::string_view s, size_t byte_offset);

}  // namespace ieforge

#endif  // IEFORGE_UTIL_UTF8_H_

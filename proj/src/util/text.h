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

#ifndef IEFORGE_UTIL_TEXT_H_
#define IEFORGE_UTIL_TEXT_H_

#include <string>
#include <string_view>
#include <vector>

namespace ieforge {

// One token of the simple whitespace+punctuation tokenization rule:
// whitespace separates tokens, each ASCII punctuation character is its own
// token, everything else accumulates into word tokens.
struct Token {
  size_t begin = 0;  // byte offset, inclusive
  size_t end = 0;    // byte offset, exclusive
  bool is_word = false;

  std::string_view View(std::string_view text) const {
    return text.substr(begin, end - begin);
  }
};

std::vector<Token> Tokenize(std::string_view text);

// Number of word tokens (punctuation excluded).
size_t WordCount(std::string_view text);

bool IsAsciiPunct(char c);

// ASCII-only case transforms; bytes >= 0x80 pass through untouched so byte
// lengths and UTF-8 offsets are stable.
std::string AsciiLower(std::string_view s);
char AsciiLowerChar(char c);
bool IsAsciiUpper(char c);
bool IsAsciiAlpha(char c);

// Strips ASCII whitespace from both ends.
std::string_view TrimView(std::string_view s);
std::string Trim(std::string_view s);

// True if [a_begin, a_end) and [b_begin, b_end) intersect.
inline bool SpansOverlap(size_t a_begin, size_t a_end, size_t b_begin, size_t b_end) {
  return a_begin < b_end && b_begin < a_end;
}

}  // namespace ieforge

#endif  // IEFORGE_UTIL_TEXT_H_

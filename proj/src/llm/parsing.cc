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

#include "llm/parsing.h"

#include "util/text.h"

namespace ieforge {
namespace {

// Index one past the close bracket balancing raw[start], or npos when the
// text ends first. Brackets inside JSON strings do not count.
size_t BalancedEnd(std::string_view raw, size_t start, char open, char close) {
  int depth = 0;
  bool in_string = false;
  bool escaped = false;
  for (size_t i = start; i < raw.size(); ++i) {
    const char c = raw[i];
    if (in_string) {
      if (escaped) {
        escaped = false;
      } else if (c == '\\') {
        escaped = true;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == open) {
      ++depth;
    } else if (c == close) {
      --depth;
      if (depth == 0) return i + 1;
    }
  }
  return std::string_view::npos;
}

}  // namespace

std::optional<nlohmann::json> ExtractFirstJson(std::string_view raw,
                                               char open) {
  const char close = (open == '[') ? ']' : '}';
  size_t pos = 0;
  while ((pos = raw.find(open, pos)) != std::string_view::npos) {
    const size_t end = BalancedEnd(raw, pos, open, close);
    if (end == std::string_view::npos) return std::nullopt;
    nlohmann::json parsed =
        nlohmann::json::parse(raw.substr(pos, end - pos), nullptr, false);
    if (!parsed.is_discarded()) return parsed;
    ++pos;
  }
  return std::nullopt;
}

const nlohmann::json* FindMemberCi(const nlohmann::json& value,
                                   std::string_view key) {
  if (!value.is_object()) return nullptr;
  for (auto it = value.begin(); it != value.end(); ++it) {
    const std::string& name = it.key();
    if (name.size() != key.size()) continue;
    bool match = true;
    for (size_t i = 0; i < name.size(); ++i) {
      if (AsciiLowerChar(name[i]) != AsciiLowerChar(key[i])) {
        match = false;
        break;
      }
    }
    if (match) return &it.value();
  }
  return nullptr;
}

std::optional<std::string> StringMemberCi(const nlohmann::json& value,
                                          std::string_view key) {
  const nlohmann::json* member = FindMemberCi(value, key);
  if (member == nullptr || !member->is_string()) return std::nullopt;
  return member->get<std::string>();
}

}  // namespace ieforge

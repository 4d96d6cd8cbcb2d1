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

#ifndef IEFORGE_SRC_LLM_PARSING_H_
#define IEFORGE_SRC_LLM_PARSING_H_

#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

namespace ieforge {

// Tolerant scan for the first parseable JSON value opening with `open`
// ('[' or '{') anywhere in free-form model output. String contents and
// escapes are respected while balancing brackets; a balanced slice that
// fails to parse is skipped and the scan continues. Nothing parseable
// anywhere returns nullopt.
std::optional<nlohmann::json> ExtractFirstJson(std::string_view raw, char open);

// Case-insensitive object member lookup ("Type", "type", "TYPE" all match).
// Returns nullptr when `value` is not an object or has no such member.
const nlohmann::json* FindMemberCi(const nlohmann::json& value,
                                   std::string_view key);

// FindMemberCi restricted to string members; empty optional otherwise.
std::optional<std::string> StringMemberCi(const nlohmann::json& value,
                                          std::string_view key);

}  // namespace ieforge

#endif  // IEFORGE_SRC_LLM_PARSING_H_

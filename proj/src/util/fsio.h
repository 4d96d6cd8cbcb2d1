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

#ifndef IEFORGE_UTIL_FSIO_H_
#define IEFORGE_UTIL_FSIO_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ieforge {

// Reads an entire file; throws std::runtime_error with the path on failure.
std::string ReadFile(const std::filesystem::path& path);

// Writes via a sibling temp file plus rename so readers never observe a
// partial file.
void WriteFileAtomic(const std::filesystem::path& path, std::string_view data);

void EnsureDir(const std::filesystem::path& dir);

// Splits into lines on '\n'; a trailing newline does not produce an empty
// final element.
std::vector<std::string> SplitLines(std::string_view data);

}  // namespace ieforge

#endif  // IEFORGE_UTIL_FSIO_H_

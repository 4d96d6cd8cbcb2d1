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

#ifndef IEFORGE_CORPUS_CORPUS_H_
#define IEFORGE_CORPUS_CORPUS_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "corpus/types.h"

namespace ieforge {

// One sample per line, UTF-8, fixed key order, character offsets on the
// wire. Both directions validate the Sample invariants; FromJsonLine throws
// std::runtime_error naming the first violation.
std::string SampleToJsonLine(const Sample& sample);
Sample SampleFromJsonLine(std::string_view line);

// Loads a JSONL corpus. All malformed or invalid records are collected and
// reported together, each prefixed with its 1-based line number. An optional
// schema turns unknown labels into errors.
std::vector<Sample> LoadSamples(const std::filesystem::path& path,
                                const Schema* schema = nullptr);

void SaveSamples(const std::vector<Sample>& samples,
                 const std::filesystem::path& path);

Schema LoadSchema(const std::filesystem::path& path);
void SaveSchema(const Schema& schema, const std::filesystem::path& path);

// Throws if any sample's labels are missing from the schema.
void CheckLabels(const std::vector<Sample>& samples, const Schema& schema);

}  // namespace ieforge

#endif  // IEFORGE_CORPUS_CORPUS_H_

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

#ifndef IEFORGE_PERTURB_WORDLISTS_H_
#define IEFORGE_PERTURB_WORDLISTS_H_

#include <string>
#include <string_view>
#include <unordered_set>

namespace ieforge {

// English stopwords, lowercase.
const std::unordered_set<std::string>& StopwordSet();

// The 1000 most common English words (embedded, lowercase).
const std::unordered_set<std::string>& HighFrequencySet();

// Case-insensitive membership tests (ASCII folding).
bool IsStopword(std::string_view word);
bool IsHighFrequency(std::string_view word);

}  // namespace ieforge

#endif  // IEFORGE_PERTURB_WORDLISTS_H_

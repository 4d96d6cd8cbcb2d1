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

#ifndef IEFORGE_CORPUS_SAMPLING_H_
#define IEFORGE_CORPUS_SAMPLING_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "corpus/types.h"

namespace ieforge {

// Multiset of labels carried by the sample's task-relevant annotations;
// {"NULL": 1} when that list is empty.
std::map<std::string, int> LabelSignature(const Sample& sample);

// Canonical string form, e.g. "LOC:1|PER:2". Signatures group equal samples
// for stratification.
std::string SignatureKey(const std::map<std::string, int>& signature);

// Draws exactly k samples preserving the corpus label distribution. Samples
// are binned by full label signature; bin quotas come from largest-remainder
// rounding, then single allocations are moved between bins while any label's
// selected count deviates from its proportional share by more than one.
// Within a bin the draw is a seeded shuffle. Deterministic for a fixed seed
// regardless of input order; the result is sorted by id.
// Throws std::invalid_argument when k == 0 or k > |corpus|.
std::vector<Sample> StratifiedSample(const std::vector<Sample>& corpus,
                                     size_t k, uint64_t seed);

}  // namespace ieforge

#endif  // IEFORGE_CORPUS_SAMPLING_H_

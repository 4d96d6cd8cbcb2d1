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

#ifndef IEFORGE_PERTURB_VALIDATE_H_
#define IEFORGE_PERTURB_VALIDATE_H_

#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "corpus/types.h"

namespace ieforge {

struct ValidationContext {
  // Lowercased surfaces known to carry labels (triggers, entity mentions).
  // When set, sentence extensions that add an occurrence of one outside the
  // gold spans are flagged as introducing new annotatable content.
  const std::unordered_set<std::string>* known_mentions = nullptr;
};

// Checks a generated adversarial candidate against its original. Returns
// human-readable violations, empty when the candidate is acceptable.
//
// Beyond the structural Sample invariants and lineage fields, each method
// has its own contract:
//   replace:  label multiset and annotation count preserved, new surfaces
//             locatable, context outside the replaced mentions unchanged;
//   context:  same token structure with at most four substituted words, all
//             outside gold spans, annotations byte-identical;
//   extend:   (label, surface) annotation multiset unchanged and, given a
//             mention lexicon, no new annotatable surface introduced;
//   typo:     one to three corrupted words, first characters intact, per-word
//             edit distance at most two, gold annotations untouched;
//   lowercase: candidate equals the deterministic case transform.
std::vector<std::string> ValidateAdversarial(
    Perturbation kind, const Sample& original, const Sample& candidate,
    const ValidationContext& ctx = ValidationContext());

// Codepoint-level edit distance (insert, delete, substitute).
size_t LevenshteinDistance(std::string_view a, std::string_view b);

}  // namespace ieforge

#endif  // IEFORGE_PERTURB_VALIDATE_H_

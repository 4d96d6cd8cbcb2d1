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

#ifndef IEFORGE_PERTURB_PERTURB_H_
#define IEFORGE_PERTURB_PERTURB_H_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "corpus/types.h"
#include "perturb/wordlists.h"
#include "util/text.h"

namespace ieforge {

struct TypoConfig {
  size_t min_sentence_words = 8;  // eligible sentences have strictly more words
  size_t min_word_chars = 6;      // eligible words have strictly more characters
  size_t min_words_to_corrupt = 1;
  size_t max_words_to_corrupt = 3;
  const std::unordered_set<std::string>* stopwords = &StopwordSet();
  const std::unordered_set<std::string>* high_frequency = &HighFrequencySet();
};

struct PerturbOutcome {
  enum class Status { kPerturbed, kUnperturbable, kRejected };

  Status status = Status::kUnperturbable;
  std::optional<Sample> sample;  // set iff status == kPerturbed
  int attempts = 0;
  std::vector<std::string> rejection_reasons;

  static PerturbOutcome Perturbed(Sample s, int attempts = 1);
  static PerturbOutcome Unperturbable(std::string reason);
  static PerturbOutcome Rejected(int attempts, std::vector<std::string> reasons);
};

// The operator tag for (method, task); throws std::invalid_argument for the
// undefined combination (context changes never apply to RE).
Perturbation KindFor(PerturbMethod method, Task task);

// Derived id and lineage fields for an adversarial copy of `parent`.
std::string ChildId(const Sample& parent, Perturbation kind);
Sample MakeChild(const Sample& parent, Perturbation kind);

// Byte ranges of text claimed by gold annotations. Offset-less triple
// surfaces claim every occurrence in the text, which overestimates but never
// lets an edit corrupt a gold mention.
std::vector<std::pair<size_t, size_t>> GoldSpans(const Sample& sample);

// Whether `kind` can produce an adversarial variant of `sample`: the task
// must match, mention replacement needs annotations, typo injection needs a
// long enough sentence with an eligible word, and context masking needs a
// maskable word.
bool Applicable(Perturbation kind, const Sample& sample,
                const TypoConfig& typo = TypoConfig());

// One text splice: erase `erase_len` bytes at `pos`, insert `insert` there.
struct Edit {
  size_t pos = 0;
  size_t erase_len = 0;
  std::string insert;
};

// Splices one edit into the text and shifts all annotation offsets sitting
// at or past the edited region. Callers guarantee no annotation overlaps it.
// Apply multiple edits right to left so earlier positions stay valid.
void ApplyEdit(Sample* s, const Edit& e);

// Corrupts 1-3 eligible words with one character edit each (replace, delete,
// insert, or swap of adjacent characters), never touching a word's first
// character or any gold span. Annotation offsets are shifted past the edits.
PerturbOutcome TypoInject(const Sample& sample, const TypoConfig& cfg,
                          uint64_t seed);

// Lowercases the text except the first letter of the first word (ASCII
// folding), rewriting annotation surfaces in lockstep. Idempotent.
PerturbOutcome LowercaseConvert(const Sample& sample);

struct MaskedContext {
  std::string masked_text;           // original text with chosen words -> [MASK]
  std::vector<Token> mask_positions; // the replaced tokens, in original-text offsets
};

// Picks 1 to min(4, candidates) non-stopword words outside all gold spans
// and replaces each with "[MASK]". Returns nothing when no word qualifies.
std::optional<MaskedContext> MaskContext(const Sample& sample, uint64_t seed);

// Expected size of an augmented pool: floor(train_size * fraction) applied
// per perturbation kind, computed as one product so the published totals
// come out exactly.
uint64_t PlanAugmentation(uint64_t train_size, double sample_fraction,
                          uint64_t kinds);

}  // namespace ieforge

#endif  // IEFORGE_PERTURB_PERTURB_H_

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

#include "perturb/perturb.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "util/rng.h"
#include "util/utf8.h"

namespace ieforge {

PerturbOutcome PerturbOutcome::Perturbed(Sample s, int attempts) {
  PerturbOutcome out;
  out.status = Status::kPerturbed;
  out.sample = std::move(s);
  out.attempts = attempts;
  return out;
}

PerturbOutcome PerturbOutcome::Unperturbable(std::string reason) {
  PerturbOutcome out;
  out.status = Status::kUnperturbable;
  out.rejection_reasons.push_back(std::move(reason));
  return out;
}

PerturbOutcome PerturbOutcome::Rejected(int attempts,
                                        std::vector<std::string> reasons) {
  PerturbOutcome out;
  out.status = Status::kRejected;
  out.attempts = attempts;
  out.rejection_reasons = std::move(reasons);
  return out;
}

Perturbation KindFor(PerturbMethod method, Task task) {
  for (Perturbation p : KindsForTask(task)) {
    if (PerturbationMethod(p) == method) return p;
  }
  throw std::invalid_argument("no operator for this method/task combination");
}

std::string ChildId(const Sample& parent, Perturbation kind) {
  return parent.id + "#" + PerturbationToString(kind);
}

Sample MakeChild(const Sample& parent, Perturbation kind) {
  Sample child = parent;
  child.id = ChildId(parent, kind);
  child.perturbation = kind;
  child.parent_id = parent.id;
  return child;
}

std::vector<std::pair<size_t, size_t>> GoldSpans(const Sample& sample) {
  std::vector<std::pair<size_t, size_t>> spans;
  for (const EntityAnn& e : sample.entities) {
    spans.emplace_back(e.start, e.end);
  }
  for (const EventAnn& e : sample.events) {
    spans.emplace_back(e.trigger_start, e.trigger_end);
  }
  auto claim = [&](const std::string& surface, std::optional<size_t> at) {
    if (surface.empty()) return;
    if (at) {
      spans.emplace_back(*at, *at + surface.size());
      return;
    }
    for (size_t pos = sample.text.find(surface); pos != std::string::npos;
         pos = sample.text.find(surface, pos + 1)) {
      spans.emplace_back(pos, pos + surface.size());
    }
  };
  for (const TripleAnn& t : sample.triples) {
    claim(t.head, t.head_start);
    claim(t.tail, t.tail_start);
  }
  std::sort(spans.begin(), spans.end());
  return spans;
}

namespace {

bool OverlapsAny(const Token& t,
                 const std::vector<std::pair<size_t, size_t>>& spans) {
  return std::any_of(spans.begin(), spans.end(), [&](const auto& s) {
    return SpansOverlap(t.begin, t.end, s.first, s.second);
  });
}

std::vector<Token> WordTokens(const std::string& text) {
  std::vector<Token> words;
  for (const Token& t : Tokenize(text)) {
    if (t.is_word) words.push_back(t);
  }
  return words;
}

std::vector<Token> EligibleTypoWords(const Sample& sample,
                                     const TypoConfig& cfg) {
  const std::vector<Token> words = WordTokens(sample.text);
  if (words.size() <= cfg.min_sentence_words) return {};
  const auto gold = GoldSpans(sample);
  std::vector<Token> eligible;
  for (const Token& w : words) {
    const std::string_view view = w.View(sample.text);
    if (Utf8Length(view) <= cfg.min_word_chars) continue;
    const std::string lower = AsciiLower(view);
    if (cfg.stopwords->count(lower) > 0) continue;
    if (cfg.high_frequency->count(lower) > 0) continue;
    if (OverlapsAny(w, gold)) continue;
    eligible.push_back(w);
  }
  return eligible;
}

std::vector<Token> MaskCandidates(const Sample& sample) {
  const auto gold = GoldSpans(sample);
  std::vector<Token> out;
  for (const Token& w : WordTokens(sample.text)) {
    if (OverlapsAny(w, gold)) continue;
    if (IsStopword(w.View(sample.text))) continue;
    out.push_back(w);
  }
  return out;
}

bool HasTaskAnnotations(const Sample& sample) {
  switch (sample.task) {
    case Task::kNer: return !sample.entities.empty();
    case Task::kRe: return !sample.triples.empty();
    case Task::kEd: return !sample.events.empty();
  }
  return false;
}

std::string_view CpView(std::string_view word,
                        const std::pair<size_t, size_t>& range) {
  return word.substr(range.first, range.second - range.first);
}

char RandomLetter(Rng& rng) { return static_cast<char>('a' + rng.Below(26)); }

// One character-level corruption of `word`, leaving its first character
// alone. Swaps need a differing adjacent pair past the first character and
// fall back to replacement when the word has none.
Edit MakeTypoEdit(const std::string& text, const Token& word, Rng& rng) {
  const std::string_view w = word.View(text);
  const auto cps = CodepointRanges(w);
  const size_t len = cps.size();
  enum { kReplace, kDelete, kInsert, kSwap };
  uint64_t op = rng.Below(4);
  if (op == kSwap) {
    std::vector<size_t> pairs;
    for (size_t i = 1; i + 1 < len; ++i) {
      if (CpView(w, cps[i]) != CpView(w, cps[i + 1])) pairs.push_back(i);
    }
    if (pairs.empty()) {
      op = kReplace;
    } else {
      const size_t i = pairs[rng.Below(pairs.size())];
      std::string swapped(CpView(w, cps[i + 1]));
      swapped += CpView(w, cps[i]);
      return {word.begin + cps[i].first, cps[i + 1].second - cps[i].first,
              std::move(swapped)};
    }
  }
  if (op == kReplace) {
    const size_t idx = 1 + rng.Below(len - 1);
    const std::string_view original = CpView(w, cps[idx]);
    std::string replacement;
    do {
      replacement.assign(1, RandomLetter(rng));
    } while (replacement == original);
    return {word.begin + cps[idx].first, cps[idx].second - cps[idx].first,
            std::move(replacement)};
  }
  if (op == kDelete) {
    const size_t idx = 1 + rng.Below(len - 1);
    return {word.begin + cps[idx].first, cps[idx].second - cps[idx].first, ""};
  }
  const size_t gap = 1 + rng.Below(len);  // insertion point, never before index 1
  const size_t pos = word.begin + (gap == len ? w.size() : cps[gap].first);
  return {pos, 0, std::string(1, RandomLetter(rng))};
}

}  // namespace

void ApplyEdit(Sample* s, const Edit& e) {
  s->text.replace(e.pos, e.erase_len, e.insert);
  const int64_t delta =
      static_cast<int64_t>(e.insert.size()) - static_cast<int64_t>(e.erase_len);
  if (delta == 0) return;
  auto shift = [&](size_t off) -> size_t {
    if (off >= e.pos + e.erase_len) {
      return static_cast<size_t>(static_cast<int64_t>(off) + delta);
    }
    return off;
  };
  for (EntityAnn& a : s->entities) {
    a.start = shift(a.start);
    a.end = shift(a.end);
  }
  for (EventAnn& a : s->events) {
    a.trigger_start = shift(a.trigger_start);
    a.trigger_end = shift(a.trigger_end);
  }
  for (TripleAnn& t : s->triples) {
    if (t.head_start) t.head_start = shift(*t.head_start);
    if (t.tail_start) t.tail_start = shift(*t.tail_start);
  }
}

bool Applicable(Perturbation kind, const Sample& sample,
                const TypoConfig& typo) {
  if (kind == Perturbation::kNone) return false;
  if (PerturbationTask(kind) != sample.task) return false;
  switch (PerturbationMethod(kind)) {
    case PerturbMethod::kReplaceMention:
      return HasTaskAnnotations(sample);
    case PerturbMethod::kChangeContext:
      return !MaskCandidates(sample).empty();
    case PerturbMethod::kExtendSentence:
      return !sample.text.empty();
    case PerturbMethod::kTypoInjection:
      return !EligibleTypoWords(sample, typo).empty();
    case PerturbMethod::kLowercaseConversion:
      return true;
  }
  return false;
}

PerturbOutcome TypoInject(const Sample& sample, const TypoConfig& cfg,
                          uint64_t seed) {
  const std::vector<Token> eligible = EligibleTypoWords(sample, cfg);
  if (eligible.empty()) {
    return PerturbOutcome::Unperturbable("no word is eligible for a typo");
  }
  Rng rng(seed);
  const size_t upper = std::min(cfg.max_words_to_corrupt, eligible.size());
  const size_t lower = std::min(cfg.min_words_to_corrupt, upper);
  const size_t count = lower + rng.Below(upper - lower + 1);

  std::vector<size_t> order(eligible.size());
  std::iota(order.begin(), order.end(), 0);
  rng.Shuffle(&order);
  std::vector<Token> chosen;
  for (size_t i = 0; i < count; ++i) chosen.push_back(eligible[order[i]]);
  std::sort(chosen.begin(), chosen.end(),
            [](const Token& a, const Token& b) { return a.begin < b.begin; });

  std::vector<Edit> edits;
  edits.reserve(chosen.size());
  for (const Token& w : chosen) {
    edits.push_back(MakeTypoEdit(sample.text, w, rng));
  }

  Sample child =
      MakeChild(sample, KindFor(PerturbMethod::kTypoInjection, sample.task));
  for (auto it = edits.rbegin(); it != edits.rend(); ++it) {
    ApplyEdit(&child, *it);
  }
  return PerturbOutcome::Perturbed(std::move(child));
}

namespace {

std::string RelocatedSurface(const std::string& original_text,
                             const std::string& new_text,
                             const std::string& surface,
                             std::optional<size_t> at) {
  size_t pos;
  if (at) {
    pos = *at;
  } else {
    pos = original_text.find(surface);
    if (pos == std::string::npos) return AsciiLower(surface);
  }
  return new_text.substr(pos, surface.size());
}

}  // namespace

PerturbOutcome LowercaseConvert(const Sample& sample) {
  Sample child = MakeChild(
      sample, KindFor(PerturbMethod::kLowercaseConversion, sample.task));
  std::string& text = child.text;

  size_t keep_begin = std::string::npos;
  size_t keep_end = std::string::npos;
  for (const Token& t : Tokenize(text)) {
    if (!t.is_word) continue;
    const auto cps = CodepointRanges(t.View(text));
    keep_begin = t.begin;
    keep_end = t.begin + cps.front().second;
    break;
  }
  for (size_t i = 0; i < text.size(); ++i) {
    if (i >= keep_begin && i < keep_end) continue;
    text[i] = AsciiLowerChar(text[i]);
  }

  for (EntityAnn& e : child.entities) {
    e.name = text.substr(e.start, e.end - e.start);
  }
  for (EventAnn& e : child.events) {
    e.trigger = text.substr(e.trigger_start, e.trigger_end - e.trigger_start);
  }
  for (TripleAnn& t : child.triples) {
    t.head = RelocatedSurface(sample.text, text, t.head, t.head_start);
    t.tail = RelocatedSurface(sample.text, text, t.tail, t.tail_start);
  }
  return PerturbOutcome::Perturbed(std::move(child));
}

std::optional<MaskedContext> MaskContext(const Sample& sample, uint64_t seed) {
  const std::vector<Token> candidates = MaskCandidates(sample);
  if (candidates.empty()) return std::nullopt;
  Rng rng(seed);
  const size_t cap = std::min<size_t>(4, candidates.size());
  const size_t m = 1 + rng.Below(cap);

  std::vector<size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), 0);
  rng.Shuffle(&order);
  std::vector<Token> picked;
  for (size_t i = 0; i < m; ++i) picked.push_back(candidates[order[i]]);
  std::sort(picked.begin(), picked.end(),
            [](const Token& a, const Token& b) { return a.begin < b.begin; });

  MaskedContext out;
  out.masked_text = sample.text;
  for (auto it = picked.rbegin(); it != picked.rend(); ++it) {
    out.masked_text.replace(it->begin, it->end - it->begin, "[MASK]");
  }
  out.mask_positions = std::move(picked);
  return out;
}

uint64_t PlanAugmentation(uint64_t train_size, double sample_fraction,
                          uint64_t kinds) {
  if (!(sample_fraction > 0.0 && sample_fraction <= 1.0)) {
    throw std::invalid_argument("sample fraction must be in (0, 1]");
  }
  // Computed as one fused product and floored, with a hair of slack so that
  // decimal fractions such as 0.3 do not truncate to the neighbor below
  // under binary floating point.
  const double exact = static_cast<double>(train_size) * sample_fraction *
                       static_cast<double>(kinds);
  return static_cast<uint64_t>(std::floor(exact + 1e-6));
}

}  // namespace ieforge

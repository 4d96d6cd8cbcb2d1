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

#include "perturb/validate.h"

#include <algorithm>
#include <map>
#include <set>
#include <utility>

#include "corpus/sampling.h"
#include "perturb/perturb.h"
#include "util/text.h"
#include "util/utf8.h"

namespace ieforge {

size_t LevenshteinDistance(std::string_view a, std::string_view b) {
  const auto ra = CodepointRanges(a);
  const auto rb = CodepointRanges(b);
  std::vector<size_t> prev(rb.size() + 1);
  std::vector<size_t> curr(rb.size() + 1);
  for (size_t j = 0; j <= rb.size(); ++j) prev[j] = j;
  for (size_t i = 1; i <= ra.size(); ++i) {
    curr[0] = i;
    const std::string_view ca = a.substr(ra[i - 1].first, ra[i - 1].second - ra[i - 1].first);
    for (size_t j = 1; j <= rb.size(); ++j) {
      const std::string_view cb = b.substr(rb[j - 1].first, rb[j - 1].second - rb[j - 1].first);
      const size_t sub = prev[j - 1] + (ca == cb ? 0 : 1);
      curr[j] = std::min({prev[j] + 1, curr[j - 1] + 1, sub});
    }
    std::swap(prev, curr);
  }
  return prev[rb.size()];
}

namespace {

using SurfaceMultiset = std::multiset<std::pair<std::string, std::string>>;

std::string_view TaskNoun(Task task) {
  switch (task) {
    case Task::kNer: return "entity";
    case Task::kRe: return "relation";
    case Task::kEd: return "event";
  }
  return "annotation";
}

size_t AnnotationCount(const Sample& s) {
  switch (s.task) {
    case Task::kNer: return s.entities.size();
    case Task::kRe: return s.triples.size();
    case Task::kEd: return s.events.size();
  }
  return 0;
}

SurfaceMultiset LabeledSurfaces(const Sample& s) {
  SurfaceMultiset out;
  for (const EntityAnn& e : s.entities) out.emplace(e.type, e.name);
  for (const EventAnn& e : s.events) out.emplace(e.event_type, e.trigger);
  for (const TripleAnn& t : s.triples) {
    out.emplace(t.relation, t.head + "\x1f" + t.tail);
  }
  return out;
}

// Text outside the gold spans, concatenated. Unusable (and empty) when the
// spans overlap each other.
std::optional<std::string> ContextRemainder(const Sample& s) {
  auto spans = GoldSpans(s);
  spans.erase(std::unique(spans.begin(), spans.end()), spans.end());
  std::string out;
  size_t at = 0;
  for (const auto& [begin, end] : spans) {
    if (begin < at) return std::nullopt;  // overlapping annotations
    out.append(s.text, at, begin - at);
    at = end;
  }
  out.append(s.text, at, s.text.size() - at);
  return out;
}

bool AllTriplesAnchored(const Sample& s) {
  return std::all_of(s.triples.begin(), s.triples.end(), [](const TripleAnn& t) {
    return t.head_start.has_value() && t.tail_start.has_value();
  });
}

// Case-insensitive occurrence count of `mention` outside the gold spans.
size_t MentionsOutsideGold(const Sample& s, const std::string& mention) {
  const std::string haystack = AsciiLower(s.text);
  const auto gold = GoldSpans(s);
  size_t count = 0;
  for (size_t pos = haystack.find(mention); pos != std::string::npos;
       pos = haystack.find(mention, pos + 1)) {
    const size_t end = pos + mention.size();
    const bool inside = std::any_of(gold.begin(), gold.end(), [&](const auto& g) {
      return SpansOverlap(pos, end, g.first, g.second);
    });
    if (!inside) ++count;
  }
  return count;
}

// Token indices covered by each annotation, in annotation order.
std::vector<std::vector<size_t>> AnnotationTokenIndices(
    const Sample& s, const std::vector<Token>& tokens) {
  std::vector<std::pair<size_t, size_t>> spans;
  for (const EntityAnn& e : s.entities) spans.emplace_back(e.start, e.end);
  for (const EventAnn& e : s.events) spans.emplace_back(e.trigger_start, e.trigger_end);
  for (const TripleAnn& t : s.triples) {
    if (t.head_start) spans.emplace_back(*t.head_start, *t.head_start + t.head.size());
    if (t.tail_start) spans.emplace_back(*t.tail_start, *t.tail_start + t.tail.size());
  }
  std::vector<std::vector<size_t>> out;
  for (const auto& [begin, end] : spans) {
    std::vector<size_t> covered;
    for (size_t i = 0; i < tokens.size(); ++i) {
      if (SpansOverlap(tokens[i].begin, tokens[i].end, begin, end)) covered.push_back(i);
    }
    out.push_back(std::move(covered));
  }
  return out;
}

void CheckReplace(const Sample& original, const Sample& candidate,
                  std::vector<std::string>* v) {
  if (AnnotationCount(original) != AnnotationCount(candidate)) {
    v->push_back("annotation count changed");
  }
  if (LabelSignature(original) != LabelSignature(candidate)) {
    v->push_back("label multiset changed");
  }
  for (const TripleAnn& t : candidate.triples) {
    if (!t.head_start && candidate.text.find(t.head) == std::string::npos) {
      v->push_back("triple head '" + t.head + "' not found in text");
    }
    if (!t.tail_start && candidate.text.find(t.tail) == std::string::npos) {
      v->push_back("triple tail '" + t.tail + "' not found in text");
    }
  }
  const bool can_compare =
      original.task != Task::kRe ||
      (AllTriplesAnchored(original) && AllTriplesAnchored(candidate));
  if (can_compare) {
    const auto before = ContextRemainder(original);
    const auto after = ContextRemainder(candidate);
    if (before && after && *before != *after) {
      v->push_back("context changed beyond the replaced mentions");
    }
  }
}

void CheckChangeContext(const Sample& original, const Sample& candidate,
                        std::vector<std::string>* v) {
  const auto orig_tokens = Tokenize(original.text);
  const auto cand_tokens = Tokenize(candidate.text);
  if (orig_tokens.size() != cand_tokens.size()) {
    v->push_back("token count changed");
    return;
  }
  std::vector<size_t> differing;
  for (size_t i = 0; i < orig_tokens.size(); ++i) {
    if (orig_tokens[i].is_word != cand_tokens[i].is_word) {
      v->push_back("token structure changed");
      return;
    }
    if (orig_tokens[i].View(original.text) != cand_tokens[i].View(candidate.text)) {
      if (!orig_tokens[i].is_word) {
        v->push_back("punctuation changed");
        return;
      }
      differing.push_back(i);
    }
  }
  if (differing.size() > 4) {
    v->push_back("more than four words substituted");
  }
  const auto orig_gold = AnnotationTokenIndices(original, orig_tokens);
  const auto cand_gold = AnnotationTokenIndices(candidate, cand_tokens);
  if (orig_gold != cand_gold) {
    v->push_back("gold spans moved relative to the token stream");
  }
  for (size_t i : differing) {
    for (const auto& covered : orig_gold) {
      if (std::find(covered.begin(), covered.end(), i) != covered.end()) {
        v->push_back("a gold span word was substituted");
        return;
      }
    }
  }
  if (LabeledSurfaces(original) != LabeledSurfaces(candidate)) {
    v->push_back("gold surfaces changed");
  }
}

void CheckExtend(const Sample& original, const Sample& candidate,
                 const ValidationContext& ctx, std::vector<std::string>* v) {
  if (AnnotationCount(original) != AnnotationCount(candidate)) {
    v->push_back("annotation count changed");
  }
  if (LabeledSurfaces(original) != LabeledSurfaces(candidate)) {
    v->push_back("gold annotations not preserved verbatim");
  }
  for (const TripleAnn& t : candidate.triples) {
    if (!t.head_start && candidate.text.find(t.head) == std::string::npos) {
      v->push_back("triple head '" + t.head + "' not found in text");
    }
    if (!t.tail_start && candidate.text.find(t.tail) == std::string::npos) {
      v->push_back("triple tail '" + t.tail + "' not found in text");
    }
  }
  if (ctx.known_mentions != nullptr) {
    for (const std::string& mention : *ctx.known_mentions) {
      if (MentionsOutsideGold(candidate, mention) >
          MentionsOutsideGold(original, mention)) {
        v->push_back("new " + std::string(TaskNoun(original.task)) +
                     " information: '" + mention + "'");
      }
    }
  }
}

void CheckTypo(const Sample& original, const Sample& candidate,
               std::vector<std::string>* v) {
  const auto orig_tokens = Tokenize(original.text);
  const auto cand_tokens = Tokenize(candidate.text);
  if (orig_tokens.size() != cand_tokens.size()) {
    v->push_back("token count changed");
    return;
  }
  size_t differing = 0;
  for (size_t i = 0; i < orig_tokens.size(); ++i) {
    const std::string_view before = orig_tokens[i].View(original.text);
    const std::string_view after = cand_tokens[i].View(candidate.text);
    if (before == after) continue;
    if (!orig_tokens[i].is_word || !cand_tokens[i].is_word) {
      v->push_back("punctuation changed");
      return;
    }
    ++differing;
    const auto first_before = CodepointRanges(before);
    const auto first_after = CodepointRanges(after);
    if (first_before.empty() || first_after.empty() ||
        before.substr(0, first_before[0].second) !=
            after.substr(0, first_after[0].second)) {
      v->push_back("first character of '" + std::string(before) + "' changed");
    }
    if (LevenshteinDistance(before, after) > 2) {
      v->push_back("edit distance of '" + std::string(before) +
                   "' -> '" + std::string(after) + "' exceeds two");
    }
  }
  if (differing == 0) v->push_back("no word was corrupted");
  if (differing > 3) v->push_back("more than three words corrupted");
  if (LabeledSurfaces(original) != LabeledSurfaces(candidate)) {
    v->push_back("gold annotations changed");
  }
}

void CheckLowercase(const Sample& original, const Sample& candidate,
                    std::vector<std::string>* v) {
  const PerturbOutcome expected = LowercaseConvert(original);
  const Sample& want = *expected.sample;
  if (candidate.text != want.text) {
    v->push_back("text does not equal the case transform");
  }
  if (candidate.entities != want.entities || candidate.triples != want.triples ||
      candidate.events != want.events) {
    v->push_back("annotations do not equal the case transform");
  }
}

}  // namespace

std::vector<std::string> ValidateAdversarial(Perturbation kind,
                                             const Sample& original,
                                             const Sample& candidate,
                                             const ValidationContext& ctx) {
  std::vector<std::string> violations = ValidateSample(candidate);
  if (candidate.task != original.task) {
    violations.push_back("task changed");
  }
  if (candidate.perturbation != kind) {
    violations.push_back("perturbation tag mismatch");
  }
  if (!candidate.parent_id || *candidate.parent_id != original.id) {
    violations.push_back("parent_id does not reference the original");
  }
  if (!violations.empty()) return violations;

  switch (PerturbationMethod(kind)) {
    case PerturbMethod::kReplaceMention:
      CheckReplace(original, candidate, &violations);
      break;
    case PerturbMethod::kChangeContext:
      CheckChangeContext(original, candidate, &violations);
      break;
    case PerturbMethod::kExtendSentence:
      CheckExtend(original, candidate, ctx, &violations);
      break;
    case PerturbMethod::kTypoInjection:
      CheckTypo(original, candidate, &violations);
      break;
    case PerturbMethod::kLowercaseConversion:
      CheckLowercase(original, candidate, &violations);
      break;
  }
  return violations;
}

}  // namespace ieforge

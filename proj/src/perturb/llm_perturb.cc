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

#include "perturb/llm_perturb.h"

#include <algorithm>
#include <numeric>
#include <optional>
#include <vector>

#include "json.hpp"
#include "llm/parsing.h"
#include "llm/templates.h"
#include "util/rng.h"
#include "util/text.h"

namespace ieforge {
namespace {

using nlohmann::json;

std::string ForbiddenNoun(Task task) {
  switch (task) {
    case Task::kNer: return "entities";
    case Task::kRe: return "relational triples";
    case Task::kEd: return "events";
  }
  return "annotations";
}

std::vector<size_t> EntityOrder(const Sample& s) {
  std::vector<size_t> order(s.entities.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return s.entities[a].start < s.entities[b].start;
  });
  return order;
}

std::vector<size_t> EventOrder(const Sample& s) {
  std::vector<size_t> order(s.events.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return s.events[a].trigger_start < s.events[b].trigger_start;
  });
  return order;
}

std::vector<size_t> TripleOrder(const Sample& s) {
  std::vector<size_t> order(s.triples.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    const auto& ta = s.triples[a];
    const auto& tb = s.triples[b];
    if (ta.head_start && tb.head_start) return *ta.head_start < *tb.head_start;
    return a < b;  // unanchored triples keep list order
  });
  return order;
}

// The JSON object in free-form model output, or a recorded reason.
std::optional<json> ParseObject(const std::string& raw, std::string* why) {
  std::optional<json> obj = ExtractFirstJson(raw, '{');
  if (!obj || !obj->is_object()) {
    *why = "no JSON object in model output";
    return std::nullopt;
  }
  return obj;
}

std::optional<std::string> RewrittenText(const json& obj, std::string* why) {
  std::optional<std::string> text = StringMemberCi(obj, "text");
  if (!text) {
    *why = "model output is missing a \"text\" string";
    return std::nullopt;
  }
  std::string trimmed = Trim(*text);
  if (trimmed.empty()) {
    *why = "model returned empty text";
    return std::nullopt;
  }
  return trimmed;
}

// Left-to-right anchoring of replacement surfaces listed in prompt order.
std::optional<size_t> LocateAfter(const std::string& text,
                                  const std::string& surface, size_t* cursor) {
  const size_t pos = text.find(surface, *cursor);
  if (pos == std::string::npos) return std::nullopt;
  *cursor = pos + surface.size();
  return pos;
}

std::optional<Sample> ParseReplaceCandidate(Perturbation kind,
                                            const Sample& original,
                                            const std::string& raw,
                                            std::string* why) {
  const std::optional<json> obj = ParseObject(raw, why);
  if (!obj) return std::nullopt;
  const std::optional<std::string> text = RewrittenText(*obj, why);
  if (!text) return std::nullopt;

  Sample candidate = MakeChild(original, kind);
  candidate.text = *text;

  if (original.task == Task::kNer) {
    const json* items = FindMemberCi(*obj, "entities");
    const std::vector<size_t> order = EntityOrder(original);
    if (items == nullptr || !items->is_array() || items->size() != order.size()) {
      *why = "model output does not list one replacement per mention";
      return std::nullopt;
    }
    size_t cursor = 0;
    candidate.entities.clear();
    for (size_t i = 0; i < order.size(); ++i) {
      const std::optional<std::string> name = StringMemberCi((*items)[i], "Name");
      if (!name || Trim(*name).empty()) {
        *why = "replacement mention " + std::to_string(i + 1) + " has no name";
        return std::nullopt;
      }
      const std::string surface = Trim(*name);
      const std::optional<size_t> pos = LocateAfter(*text, surface, &cursor);
      if (!pos) {
        *why = "replacement mention not found in rewritten text: '" + surface + "'";
        return std::nullopt;
      }
      candidate.entities.push_back({original.entities[order[i]].type, surface,
                                    *pos, *pos + surface.size()});
    }
  } else if (original.task == Task::kRe) {
    const json* items = FindMemberCi(*obj, "triples");
    const std::vector<size_t> order = TripleOrder(original);
    if (items == nullptr || !items->is_array() || items->size() != order.size()) {
      *why = "model output does not list one replacement per triple";
      return std::nullopt;
    }
    candidate.triples.clear();
    for (size_t i = 0; i < order.size(); ++i) {
      const std::optional<std::string> head = StringMemberCi((*items)[i], "Head");
      const std::optional<std::string> tail = StringMemberCi((*items)[i], "Tail");
      if (!head || !tail || Trim(*head).empty() || Trim(*tail).empty()) {
        *why = "replacement triple " + std::to_string(i + 1) +
               " is missing its head or tail";
        return std::nullopt;
      }
      const TripleAnn& base = original.triples[order[i]];
      TripleAnn t;
      t.relation = base.relation;
      t.head = Trim(*head);
      t.tail = Trim(*tail);
      if (base.head_start && base.tail_start) {
        const size_t head_pos = text->find(t.head);
        const size_t tail_pos = text->find(t.tail);
        if (head_pos == std::string::npos || tail_pos == std::string::npos) {
          *why = "replacement mention not found in rewritten text";
          return std::nullopt;
        }
        t.head_start = head_pos;
        t.tail_start = tail_pos;
      }
      candidate.triples.push_back(std::move(t));
    }
  } else {
    const json* items = FindMemberCi(*obj, "events");
    const std::vector<size_t> order = EventOrder(original);
    if (items == nullptr || !items->is_array() || items->size() != order.size()) {
      *why = "model output does not list one replacement per trigger";
      return std::nullopt;
    }
    size_t cursor = 0;
    candidate.events.clear();
    for (size_t i = 0; i < order.size(); ++i) {
      const std::optional<std::string> trigger =
          StringMemberCi((*items)[i], "Trigger");
      if (!trigger || Trim(*trigger).empty()) {
        *why = "replacement trigger " + std::to_string(i + 1) + " has no text";
        return std::nullopt;
      }
      const std::string surface = Trim(*trigger);
      const std::optional<size_t> pos = LocateAfter(*text, surface, &cursor);
      if (!pos) {
        *why = "replacement trigger not found in rewritten text: '" + surface + "'";
        return std::nullopt;
      }
      candidate.events.push_back({original.events[order[i]].event_type, surface,
                                  *pos, *pos + surface.size()});
    }
  }
  return candidate;
}

std::optional<Sample> ParseExtendCandidate(Perturbation kind,
                                           const Sample& original,
                                           const std::string& raw,
                                           std::string* why) {
  const std::optional<json> obj = ParseObject(raw, why);
  if (!obj) return std::nullopt;
  const std::optional<std::string> text = RewrittenText(*obj, why);
  if (!text) return std::nullopt;
  if (!text->starts_with(original.text)) {
    *why = "extension does not begin with the original sentence";
    return std::nullopt;
  }
  if (text->size() == original.text.size()) {
    *why = "no extension produced";
    return std::nullopt;
  }
  // The original is a verbatim prefix, so annotations keep their offsets.
  Sample candidate = MakeChild(original, kind);
  candidate.text = *text;
  return candidate;
}

bool IsSingleWord(const std::string& w) {
  if (w.empty()) return false;
  const std::vector<Token> tokens = Tokenize(w);
  return tokens.size() == 1 && tokens[0].is_word &&
         tokens[0].begin == 0 && tokens[0].end == w.size();
}

std::optional<Sample> ParseContextCandidate(Perturbation kind,
                                            const Sample& original,
                                            const MaskedContext& masked,
                                            const std::string& raw,
                                            uint64_t choice_seed,
                                            std::string* why) {
  const std::optional<json> obj = ParseObject(raw, why);
  if (!obj) return std::nullopt;
  const json* predictions = FindMemberCi(*obj, "predictions");
  if (predictions == nullptr || !predictions->is_array() ||
      predictions->size() != masked.mask_positions.size()) {
    *why = "model output does not list one prediction set per mask";
    return std::nullopt;
  }

  Rng rng(choice_seed);
  std::vector<std::string> chosen;
  for (size_t i = 0; i < predictions->size(); ++i) {
    const json& options = (*predictions)[i];
    std::vector<std::string> words;
    if (options.is_array()) {
      for (const json& w : options) {
        if (!w.is_string()) continue;
        const std::string word = Trim(w.get<std::string>());
        if (IsSingleWord(word)) words.push_back(word);
      }
    }
    if (words.empty()) {
      *why = "mask " + std::to_string(i + 1) + " has no single-word prediction";
      return std::nullopt;
    }
    chosen.push_back(words[rng.Below(words.size())]);
  }

  // Splice the chosen words into the original text at the masked tokens,
  // right to left so earlier offsets stay valid.
  Sample candidate = MakeChild(original, kind);
  for (size_t i = masked.mask_positions.size(); i-- > 0;) {
    const Token& t = masked.mask_positions[i];
    ApplyEdit(&candidate, {t.begin, t.end - t.begin, chosen[i]});
  }
  return candidate;
}

}  // namespace

std::string ReplacePrompt(const Sample& sample) {
  std::string block;
  switch (sample.task) {
    case Task::kNer:
      for (size_t i : EntityOrder(sample)) {
        const EntityAnn& e = sample.entities[i];
        block += "- " + e.type + ": " + e.name + "\n";
      }
      return RenderTemplate("replace_entities", {{"mentions_block", Trim(block)},
                                                 {"test_sentence", sample.text}});
    case Task::kRe:
      for (size_t i : TripleOrder(sample)) {
        const TripleAnn& t = sample.triples[i];
        block += "- " + t.relation + ": head \"" + t.head + "\", tail \"" +
                 t.tail + "\"\n";
      }
      return RenderTemplate("replace_triples", {{"mentions_block", Trim(block)},
                                                {"test_sentence", sample.text}});
    case Task::kEd:
      for (size_t i : EventOrder(sample)) {
        const EventAnn& e = sample.events[i];
        block += "- " + e.event_type + ": " + e.trigger + "\n";
      }
      return RenderTemplate("replace_triggers", {{"mentions_block", Trim(block)},
                                                 {"test_sentence", sample.text}});
  }
  throw std::logic_error("unreachable task");
}

std::string ExtendPrompt(const Sample& sample) {
  return RenderTemplate("extend_sentence", {{"forbidden", ForbiddenNoun(sample.task)},
                                            {"test_sentence", sample.text}});
}

std::string ContextPrompt(const std::string& masked_text, Task task) {
  return RenderTemplate("change_context", {{"forbidden", ForbiddenNoun(task)},
                                           {"masked_sentence", masked_text}});
}

PerturbOutcome LlmPerturb(Perturbation kind, const Sample& sample,
                          LlmGateway& gateway, uint64_t seed,
                          const LlmPerturbOptions& options) {
  const PerturbMethod method = PerturbationMethod(kind);
  if (method == PerturbMethod::kTypoInjection ||
      method == PerturbMethod::kLowercaseConversion) {
    throw std::invalid_argument(PerturbationToString(kind) +
                                " is rule-based, not model-based");
  }
  if (!Applicable(kind, sample)) {
    return PerturbOutcome::Unperturbable(PerturbationToString(kind) +
                                         " is not applicable to " + sample.id);
  }

  const std::string tag = PerturbationToString(kind);
  std::optional<MaskedContext> masked;
  std::string prompt;
  switch (method) {
    case PerturbMethod::kReplaceMention:
      prompt = ReplacePrompt(sample);
      break;
    case PerturbMethod::kExtendSentence:
      prompt = ExtendPrompt(sample);
      break;
    case PerturbMethod::kChangeContext:
      masked = MaskContext(sample, DeriveSeed(seed, {sample.id, tag, "mask"}));
      if (!masked) {
        return PerturbOutcome::Unperturbable("no maskable word in " + sample.id);
      }
      prompt = ContextPrompt(masked->masked_text, sample.task);
      break;
    default:
      break;
  }

  std::vector<std::string> reasons;
  for (int attempt = 1; attempt <= options.max_attempts; ++attempt) {
    const uint64_t attempt_seed =
        DeriveSeed(seed, {sample.id, tag, std::to_string(attempt)});
    ChatRequest req;
    req.model = gateway.config().model;
    req.messages = {{"user", prompt}};
    req.temperature = options.temperature;
    req.seed = attempt_seed;
    const std::string raw = gateway.CachedComplete(req).first;

    std::string why;
    std::optional<Sample> candidate;
    switch (method) {
      case PerturbMethod::kReplaceMention:
        candidate = ParseReplaceCandidate(kind, sample, raw, &why);
        break;
      case PerturbMethod::kExtendSentence:
        candidate = ParseExtendCandidate(kind, sample, raw, &why);
        break;
      case PerturbMethod::kChangeContext:
        candidate = ParseContextCandidate(kind, sample, *masked, raw,
                                          attempt_seed, &why);
        break;
      default:
        break;
    }
    if (!candidate) {
      reasons.push_back("attempt " + std::to_string(attempt) + ": " + why);
      continue;
    }
    std::vector<std::string> violations =
        ValidateAdversarial(kind, sample, *candidate, options.validation);
    if (violations.empty()) {
      return PerturbOutcome::Perturbed(std::move(*candidate), attempt);
    }
    for (std::string& v : violations) {
      reasons.push_back("attempt " + std::to_string(attempt) + ": " + std::move(v));
    }
  }
  return PerturbOutcome::Rejected(options.max_attempts, std::move(reasons));
}

}  // namespace ieforge

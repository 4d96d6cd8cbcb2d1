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

#include "corpus/types.h"

#include <algorithm>
#include <stdexcept>

#include "util/utf8.h"

namespace ieforge {

std::string_view TaskToString(Task task) {
  switch (task) {
    case Task::kNer: return "NER";
    case Task::kRe: return "RE";
    case Task::kEd: return "ED";
  }
  throw std::invalid_argument("unknown task value");
}

Task TaskFromString(std::string_view s) {
  if (s == "NER") return Task::kNer;
  if (s == "RE") return Task::kRe;
  if (s == "ED") return Task::kEd;
  throw std::invalid_argument("unknown task: " + std::string(s));
}

std::string PerturbationToString(Perturbation p) {
  if (p == Perturbation::kNone) return "none";
  return "P" + std::to_string(static_cast<int>(p));
}

Perturbation PerturbationFromString(std::string_view s) {
  if (s == "none") return Perturbation::kNone;
  if (s.size() >= 2 && s[0] == 'P') {
    int n = 0;
    for (size_t i = 1; i < s.size(); ++i) {
      if (s[i] < '0' || s[i] > '9') { n = 0; break; }
      n = n * 10 + (s[i] - '0');
    }
    if (n >= 1 && n <= 14) return static_cast<Perturbation>(n);
  }
  throw std::invalid_argument("unknown perturbation: " + std::string(s));
}

Task PerturbationTask(Perturbation p) {
  const int n = static_cast<int>(p);
  if (n >= 1 && n <= 5) return Task::kNer;
  if (n >= 6 && n <= 9) return Task::kRe;
  if (n >= 10 && n <= 14) return Task::kEd;
  throw std::invalid_argument("perturbation has no task: " + PerturbationToString(p));
}

PerturbMethod PerturbationMethod(Perturbation p) {
  switch (p) {
    case Perturbation::kP1:
    case Perturbation::kP6:
    case Perturbation::kP10:
      return PerturbMethod::kReplaceMention;
    case Perturbation::kP2:
    case Perturbation::kP11:
      return PerturbMethod::kChangeContext;
    case Perturbation::kP3:
    case Perturbation::kP7:
    case Perturbation::kP12:
      return PerturbMethod::kExtendSentence;
    case Perturbation::kP4:
    case Perturbation::kP8:
    case Perturbation::kP13:
      return PerturbMethod::kTypoInjection;
    case Perturbation::kP5:
    case Perturbation::kP9:
    case Perturbation::kP14:
      return PerturbMethod::kLowercaseConversion;
    case Perturbation::kNone:
      break;
  }
  throw std::invalid_argument("perturbation has no method: " + PerturbationToString(p));
}

std::vector<Perturbation> KindsForTask(Task task) {
  switch (task) {
    case Task::kNer:
      return {Perturbation::kP1, Perturbation::kP2, Perturbation::kP3,
              Perturbation::kP4, Perturbation::kP5};
    case Task::kRe:
      return {Perturbation::kP6, Perturbation::kP7, Perturbation::kP8,
              Perturbation::kP9};
    case Task::kEd:
      return {Perturbation::kP10, Perturbation::kP11, Perturbation::kP12,
              Perturbation::kP13, Perturbation::kP14};
  }
  throw std::invalid_argument("unknown task value");
}

bool Schema::HasLabel(std::string_view label) const {
  return std::any_of(types.begin(), types.end(),
                     [&](const SchemaType& t) { return t.label == label; });
}

namespace {

void CheckSpan(const Sample& sample, std::string_view what, size_t start,
               size_t end, std::string_view surface,
               std::vector<std::string>* out) {
  const std::string context = std::string(what) + " '" + std::string(surface) + "'";
  if (start >= end) {
    out->push_back(context + ": start must precede end");
    return;
  }
  if (end > sample.text.size()) {
    out->push_back(context + ": offsets exceed text length");
    return;
  }
  if (!IsBoundary(sample.text, start) || !IsBoundary(sample.text, end)) {
    out->push_back(context + ": offsets split a UTF-8 sequence");
    return;
  }
  if (std::string_view(sample.text).substr(start, end - start) != surface) {
    out->push_back(context + ": text at offsets does not match surface");
  }
}

void CheckAnchored(const Sample& sample, std::string_view what, size_t start,
                   std::string_view surface, std::vector<std::string>* out) {
  if (surface.empty()) return;  // emptiness reported separately
  CheckSpan(sample, what, start, start + surface.size(), surface, out);
}

void CheckLabel(const Schema* schema, std::string_view label,
                std::vector<std::string>* out) {
  if (schema != nullptr && !schema->HasLabel(label)) {
    out->push_back("unknown label: " + std::string(label));
  }
}

}  // namespace

std::vector<std::string> ValidateSample(const Sample& sample,
                                        const Schema* schema) {
  std::vector<std::string> violations;
  if (sample.id.empty()) violations.push_back("id is empty");

  if (sample.task != Task::kNer && !sample.entities.empty()) {
    violations.push_back("entities present on a non-NER sample");
  }
  if (sample.task != Task::kRe && !sample.triples.empty()) {
    violations.push_back("triples present on a non-RE sample");
  }
  if (sample.task != Task::kEd && !sample.events.empty()) {
    violations.push_back("events present on a non-ED sample");
  }

  for (const EntityAnn& e : sample.entities) {
    if (e.name.empty()) violations.push_back("entity with empty name");
    CheckLabel(schema, e.type, &violations);
    CheckSpan(sample, "entity", e.start, e.end, e.name, &violations);
  }
  for (const TripleAnn& t : sample.triples) {
    if (t.head.empty()) violations.push_back("triple with empty head");
    if (t.tail.empty()) violations.push_back("triple with empty tail");
    CheckLabel(schema, t.relation, &violations);
    if (t.head_start) {
      CheckAnchored(sample, "triple head", *t.head_start, t.head, &violations);
    }
    if (t.tail_start) {
      CheckAnchored(sample, "triple tail", *t.tail_start, t.tail, &violations);
    }
  }
  for (const EventAnn& e : sample.events) {
    if (e.trigger.empty()) violations.push_back("event with empty trigger");
    CheckLabel(schema, e.event_type, &violations);
    CheckSpan(sample, "event trigger", e.trigger_start, e.trigger_end,
              e.trigger, &violations);
  }

  const bool unperturbed = sample.perturbation == Perturbation::kNone;
  if (unperturbed && sample.parent_id.has_value()) {
    violations.push_back("unperturbed sample carries a parent_id");
  }
  if (!unperturbed && !sample.parent_id.has_value()) {
    violations.push_back("perturbed sample lacks a parent_id");
  }
  if (!unperturbed && PerturbationTask(sample.perturbation) != sample.task) {
    violations.push_back("perturbation " + PerturbationToString(sample.perturbation) +
                         " does not apply to task " +
                         std::string(TaskToString(sample.task)));
  }
  return violations;
}

}  // namespace ieforge

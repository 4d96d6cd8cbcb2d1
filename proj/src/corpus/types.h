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

#ifndef IEFORGE_CORPUS_TYPES_H_
#define IEFORGE_CORPUS_TYPES_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ieforge {

enum class Task {
  kNer,
  kRe,
  kEd,
};

std::string_view TaskToString(Task task);
Task TaskFromString(std::string_view s);  // throws std::invalid_argument

// The 14 perturbation operators plus the unperturbed tag. P1-P5 apply to
// NER, P6-P9 to RE, P10-P14 to ED.
enum class Perturbation : int {
  kNone = 0,
  kP1 = 1,    // replace entities
  kP2 = 2,    // change context (NER)
  kP3 = 3,    // extend sentence (NER)
  kP4 = 4,    // typo injection (NER)
  kP5 = 5,    // lowercase conversion (NER)
  kP6 = 6,    // replace triples
  kP7 = 7,    // extend sentence (RE)
  kP8 = 8,    // typo injection (RE)
  kP9 = 9,    // lowercase conversion (RE)
  kP10 = 10,  // replace triggers
  kP11 = 11,  // change context (ED)
  kP12 = 12,  // extend sentence (ED)
  kP13 = 13,  // typo injection (ED)
  kP14 = 14,  // lowercase conversion (ED)
};

// How an operator edits the text, independent of task.
enum class PerturbMethod {
  kReplaceMention,
  kChangeContext,
  kExtendSentence,
  kTypoInjection,
  kLowercaseConversion,
};

std::string PerturbationToString(Perturbation p);
Perturbation PerturbationFromString(std::string_view s);  // throws std::invalid_argument
Task PerturbationTask(Perturbation p);                    // requires p != kNone
PerturbMethod PerturbationMethod(Perturbation p);         // requires p != kNone

// All operators defined for a task, in numeric order.
std::vector<Perturbation> KindsForTask(Task task);

// All annotation offsets below are byte offsets into Sample::text and must
// land on UTF-8 codepoint boundaries. The JSONL layer persists them as
// character offsets; conversion happens on load and save.

struct EntityAnn {
  std::string type;
  std::string name;
  size_t start = 0;
  size_t end = 0;

  bool operator==(const EntityAnn&) const = default;
};

struct TripleAnn {
  std::string relation;
  std::string head;
  std::string tail;
  std::optional<size_t> head_start;
  std::optional<size_t> tail_start;

  bool operator==(const TripleAnn&) const = default;
};

struct EventAnn {
  std::string event_type;
  std::string trigger;
  size_t trigger_start = 0;
  size_t trigger_end = 0;

  bool operator==(const EventAnn&) const = default;
};

// One annotated sentence. Only the annotation list matching `task` may be
// non-empty; perturbation == kNone exactly when parent_id is absent.
struct Sample {
  std::string id;
  Task task = Task::kNer;
  std::string dataset;
  std::string text;
  std::vector<EntityAnn> entities;
  std::vector<TripleAnn> triples;
  std::vector<EventAnn> events;
  Perturbation perturbation = Perturbation::kNone;
  std::optional<std::string> parent_id;

  bool operator==(const Sample&) const = default;
};

struct SchemaType {
  std::string label;
  std::string description;

  bool operator==(const SchemaType&) const = default;
};

// Label inventory for one dataset/task pair.
struct Schema {
  std::string dataset;
  Task task = Task::kNer;
  std::vector<SchemaType> types;

  bool HasLabel(std::string_view label) const;

  bool operator==(const Schema&) const = default;
};

// Structural checks: the task/list coupling, offset bounds and boundary
// alignment, surface/substring agreement, the perturbation/parent coupling,
// and (when a schema is given) label membership. Returns human-readable
// violations; empty means valid.
std::vector<std::string> ValidateSample(const Sample& sample,
                                        const Schema* schema = nullptr);

}  // namespace ieforge

#endif  // IEFORGE_CORPUS_TYPES_H_

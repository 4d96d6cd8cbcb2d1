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

#include "extract/extraction.h"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "json.hpp"
#include "llm/parsing.h"
#include "llm/templates.h"
#include "util/fsio.h"
#include "util/parallel.h"
#include "util/rng.h"
#include "util/text.h"

namespace ieforge {
namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

const char* ExtractTemplateName(Task task) {
  switch (task) {
    case Task::kNer: return "ner_extract";
    case Task::kRe: return "re_extract";
    case Task::kEd: return "ed_extract";
  }
  return "";
}

std::string TypesBlock(const Schema& schema) {
  std::string block;
  for (const SchemaType& t : schema.types) {
    if (!block.empty()) block += '\n';
    block += t.label + ": " + t.description;
  }
  return block;
}

std::string ExamplesSection(const std::vector<Sample>& demos, size_t k) {
  if (k == 0) return "";
  std::string section = "\n## Examples (" + std::to_string(k) + "-shot)\n";
  for (size_t i = 0; i < k; ++i) {
    section += std::to_string(i + 1) + ". Input: " + demos[i].text + "\n";
    section += "   Output: " + GoldOutputJson(demos[i]) + "\n";
  }
  section +=
      "The example sentences are selected from the training set, and the "
      "recognition results should fully comply with the defined Output "
      "Formatting.\n";
  return section;
}

}  // namespace

std::vector<Sample> SelectDemos(const std::vector<Sample>& pool,
                                const Sample& sample, size_t k,
                                uint64_t seed) {
  std::vector<size_t> eligible;
  eligible.reserve(pool.size());
  for (size_t i = 0; i < pool.size(); ++i) {
    if (pool[i].id != sample.id) eligible.push_back(i);
  }
  std::sort(eligible.begin(), eligible.end(), [&](size_t a, size_t b) {
    return pool[a].id < pool[b].id;
  });
  if (k > eligible.size()) {
    throw std::invalid_argument("requested " + std::to_string(k) +
                                " demos but only " +
                                std::to_string(eligible.size()) +
                                " are eligible");
  }
  Rng rng(DeriveSeed(seed, {"demos", sample.id}));
  // Partial Fisher-Yates: the first k slots become the draw.
  for (size_t i = 0; i < k; ++i) {
    const size_t j = i + rng.Below(eligible.size() - i);
    std::swap(eligible[i], eligible[j]);
  }
  std::vector<Sample> demos;
  demos.reserve(k);
  for (size_t i = 0; i < k; ++i) demos.push_back(pool[eligible[i]]);
  return demos;
}

std::string GoldOutputJson(const Sample& sample) {
  ordered_json arr = ordered_json::array();
  switch (sample.task) {
    case Task::kNer:
      for (const EntityAnn& e : sample.entities) {
        arr.push_back({{"Type", e.type}, {"Name", e.name}});
      }
      break;
    case Task::kRe:
      for (const TripleAnn& t : sample.triples) {
        arr.push_back({{"Head", t.head}, {"Type", t.relation}, {"Tail", t.tail}});
      }
      break;
    case Task::kEd:
      for (const EventAnn& e : sample.events) {
        arr.push_back({{"Type", e.event_type}, {"Trigger", e.trigger}});
      }
      break;
  }
  return arr.dump();
}

std::string BuildFewshotPrompt(const Sample& sample, const Schema& schema,
                               const std::vector<Sample>& demos, size_t k) {
  if (schema.task != sample.task) {
    throw std::invalid_argument("schema task does not match sample " + sample.id);
  }
  if (k > demos.size()) {
    throw std::invalid_argument("prompt needs " + std::to_string(k) +
                                " demos, got " + std::to_string(demos.size()));
  }
  for (size_t i = 0; i < k; ++i) {
    if (demos[i].id == sample.id) {
      throw std::invalid_argument("demo list leaks the test sample " + sample.id);
    }
  }
  return RenderTemplate(ExtractTemplateName(sample.task),
                        {{"types_block", TypesBlock(schema)},
                         {"examples_section", ExamplesSection(demos, k)},
                         {"test_sentence", sample.text}});
}

PredictionSet ParseModelOutput(const std::string& raw, Task task,
                               size_t* dropped) {
  PredictionSet set;
  set.raw_output = raw;
  size_t drop_count = 0;

  const std::optional<json> arr = ExtractFirstJson(raw, '[');
  if (!arr || !arr->is_array()) {
    if (dropped != nullptr) *dropped = 0;
    return set;  // parse_ok stays false, lists stay empty
  }
  set.parse_ok = true;

  std::set<std::string> seen;
  auto unseen = [&seen](const std::string& key) {
    return seen.insert(key).second;
  };

  for (const json& item : *arr) {
    switch (task) {
      case Task::kNer: {
        const auto type = StringMemberCi(item, "Type");
        const auto name = StringMemberCi(item, "Name");
        if (!type || !name || Trim(*type).empty() || Trim(*name).empty()) {
          ++drop_count;
          break;
        }
        PredEntity e{Trim(*type), Trim(*name)};
        if (unseen(e.type + "\x1f" + e.name)) set.entities.push_back(std::move(e));
        break;
      }
      case Task::kRe: {
        const auto head = StringMemberCi(item, "Head");
        const auto type = StringMemberCi(item, "Type");
        const auto tail = StringMemberCi(item, "Tail");
        if (!head || !type || !tail || Trim(*head).empty() ||
            Trim(*type).empty() || Trim(*tail).empty()) {
          ++drop_count;
          break;
        }
        PredTriple t{Trim(*type), Trim(*head), Trim(*tail)};
        if (unseen(t.relation + "\x1f" + t.head + "\x1f" + t.tail)) {
          set.triples.push_back(std::move(t));
        }
        break;
      }
      case Task::kEd: {
        const auto type = StringMemberCi(item, "Type");
        const auto trigger = StringMemberCi(item, "Trigger");
        if (!type || !trigger || Trim(*type).empty() || Trim(*trigger).empty()) {
          ++drop_count;
          break;
        }
        PredEvent e{Trim(*type), Trim(*trigger)};
        if (unseen(e.event_type + "\x1f" + e.trigger)) {
          set.events.push_back(std::move(e));
        }
        break;
      }
    }
  }
  if (dropped != nullptr) *dropped = drop_count;
  return set;
}

std::vector<PredictionSet> RunExtraction(const std::vector<Sample>& corpus,
                                         const Schema& schema,
                                         const std::vector<Sample>& train_pool,
                                         LlmGateway& gateway,
                                         const ExtractionOptions& options) {
  std::vector<size_t> order(corpus.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return corpus[a].id < corpus[b].id;
  });

  std::vector<PredictionSet> results(corpus.size());
  ParallelFor(order.size(), options.workers, [&](size_t slot) {
    const Sample& sample = corpus[order[slot]];
    const std::vector<Sample> demos =
        SelectDemos(train_pool, sample, options.shots, options.seed);
    const std::string prompt =
        BuildFewshotPrompt(sample, schema, demos, options.shots);
    ChatRequest req;
    req.model = gateway.config().model;
    req.messages = {{"user", prompt}};
    PredictionSet set;
    try {
      const std::string raw = gateway.CachedComplete(req).first;
      set = ParseModelOutput(raw, sample.task);
    } catch (const GatewayError& e) {
      set.parse_ok = false;
      set.raw_output = std::string("gateway error: ") + e.what();
    }
    set.sample_id = sample.id;
    results[slot] = std::move(set);
  });
  return results;
}

std::string PredictionToJsonLine(const PredictionSet& set) {
  if (!set.parse_ok &&
      !(set.entities.empty() && set.triples.empty() && set.events.empty())) {
    throw std::invalid_argument("failed prediction set " + set.sample_id +
                                " carries predictions");
  }
  ordered_json j;
  j["sample_id"] = set.sample_id;
  j["entities"] = ordered_json::array();
  for (const PredEntity& e : set.entities) {
    j["entities"].push_back({{"type", e.type}, {"name", e.name}});
  }
  j["triples"] = ordered_json::array();
  for (const PredTriple& t : set.triples) {
    j["triples"].push_back(
        {{"relation", t.relation}, {"head", t.head}, {"tail", t.tail}});
  }
  j["events"] = ordered_json::array();
  for (const PredEvent& e : set.events) {
    j["events"].push_back({{"event_type", e.event_type}, {"trigger", e.trigger}});
  }
  j["parse_ok"] = set.parse_ok;
  j["raw_output"] = set.raw_output;
  return j.dump();
}

PredictionSet PredictionFromJsonLine(const std::string& line) {
  const json j = json::parse(line);
  PredictionSet set;
  set.sample_id = j.at("sample_id").get<std::string>();
  set.parse_ok = j.at("parse_ok").get<bool>();
  set.raw_output = j.at("raw_output").get<std::string>();
  for (const json& e : j.value("entities", json::array())) {
    set.entities.push_back({e.at("type").get<std::string>(),
                            e.at("name").get<std::string>()});
  }
  for (const json& t : j.value("triples", json::array())) {
    set.triples.push_back({t.at("relation").get<std::string>(),
                           t.at("head").get<std::string>(),
                           t.at("tail").get<std::string>()});
  }
  for (const json& e : j.value("events", json::array())) {
    set.events.push_back({e.at("event_type").get<std::string>(),
                          e.at("trigger").get<std::string>()});
  }
  if (!set.parse_ok &&
      !(set.entities.empty() && set.triples.empty() && set.events.empty())) {
    throw std::invalid_argument("failed prediction set " + set.sample_id +
                                " carries predictions");
  }
  return set;
}

void SavePredictions(const std::string& path,
                     const std::vector<PredictionSet>& sets) {
  std::string out;
  for (const PredictionSet& s : sets) {
    out += PredictionToJsonLine(s);
    out += '\n';
  }
  WriteFileAtomic(path, out);
}

std::vector<PredictionSet> LoadPredictions(const std::string& path) {
  const std::vector<std::string> lines = SplitLines(ReadFile(path));
  std::vector<PredictionSet> sets;
  sets.reserve(lines.size());
  for (size_t i = 0; i < lines.size(); ++i) {
    if (Trim(lines[i]).empty()) continue;
    try {
      sets.push_back(PredictionFromJsonLine(lines[i]));
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ": line " + std::to_string(i + 1) + ": " +
                               e.what());
    }
  }
  return sets;
}

}  // namespace ieforge

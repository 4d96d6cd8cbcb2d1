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

#include "corpus/corpus.h"

#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "util/fsio.h"
#include "util/utf8.h"

namespace ieforge {

namespace {

using OrderedJson = nlohmann::ordered_json;

size_t ByteOffsetToChar(const std::string& text, size_t byte_offset,
                        std::string_view what) {
  const size_t c = ByteToChar(text, byte_offset);
  if (c == std::string::npos) {
    throw std::runtime_error(std::string(what) +
                             ": byte offset is not a codepoint boundary");
  }
  return c;
}

size_t CharOffsetToByte(const std::string& text, size_t char_offset,
                        std::string_view what) {
  const size_t b = CharToByte(text, char_offset);
  if (b == std::string::npos) {
    throw std::runtime_error(std::string(what) + ": offset " +
                             std::to_string(char_offset) + " is out of range");
  }
  return b;
}

const OrderedJson& Require(const OrderedJson& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw std::runtime_error(std::string("missing key: ") + key);
  }
  return *it;
}

std::string RequireString(const OrderedJson& obj, const char* key) {
  const OrderedJson& v = Require(obj, key);
  if (!v.is_string()) {
    throw std::runtime_error(std::string("key is not a string: ") + key);
  }
  return v.get<std::string>();
}

size_t RequireOffset(const OrderedJson& obj, const char* key) {
  const OrderedJson& v = Require(obj, key);
  if (!v.is_number_unsigned()) {
    throw std::runtime_error(std::string("key is not a non-negative integer: ") + key);
  }
  return v.get<size_t>();
}

}  // namespace

std::string SampleToJsonLine(const Sample& sample) {
  OrderedJson obj;
  obj["id"] = sample.id;
  obj["task"] = std::string(TaskToString(sample.task));
  obj["dataset"] = sample.dataset;
  obj["text"] = sample.text;

  OrderedJson entities = OrderedJson::array();
  for (const EntityAnn& e : sample.entities) {
    OrderedJson item;
    item["type"] = e.type;
    item["name"] = e.name;
    item["start"] = ByteOffsetToChar(sample.text, e.start, "entity start");
    item["end"] = ByteOffsetToChar(sample.text, e.end, "entity end");
    entities.push_back(std::move(item));
  }
  obj["entities"] = std::move(entities);

  OrderedJson triples = OrderedJson::array();
  for (const TripleAnn& t : sample.triples) {
    OrderedJson item;
    item["relation"] = t.relation;
    item["head"] = t.head;
    item["tail"] = t.tail;
    if (t.head_start) {
      item["head_start"] = ByteOffsetToChar(sample.text, *t.head_start, "head_start");
    }
    if (t.tail_start) {
      item["tail_start"] = ByteOffsetToChar(sample.text, *t.tail_start, "tail_start");
    }
    triples.push_back(std::move(item));
  }
  obj["triples"] = std::move(triples);

  OrderedJson events = OrderedJson::array();
  for (const EventAnn& e : sample.events) {
    OrderedJson item;
    item["event_type"] = e.event_type;
    item["trigger"] = e.trigger;
    item["trigger_start"] =
        ByteOffsetToChar(sample.text, e.trigger_start, "trigger_start");
    item["trigger_end"] =
        ByteOffsetToChar(sample.text, e.trigger_end, "trigger_end");
    events.push_back(std::move(item));
  }
  obj["events"] = std::move(events);

  obj["perturbation"] = PerturbationToString(sample.perturbation);
  if (sample.parent_id) {
    obj["parent_id"] = *sample.parent_id;
  }
  return obj.dump();
}

Sample SampleFromJsonLine(std::string_view line) {
  OrderedJson obj;
  try {
    obj = OrderedJson::parse(line);
  } catch (const OrderedJson::parse_error& e) {
    throw std::runtime_error(std::string("invalid JSON: ") + e.what());
  }
  if (!obj.is_object()) {
    throw std::runtime_error("record is not a JSON object");
  }

  Sample sample;
  sample.id = RequireString(obj, "id");
  sample.task = TaskFromString(RequireString(obj, "task"));
  sample.dataset = RequireString(obj, "dataset");
  sample.text = RequireString(obj, "text");
  sample.perturbation = PerturbationFromString(RequireString(obj, "perturbation"));
  if (auto it = obj.find("parent_id"); it != obj.end() && !it->is_null()) {
    if (!it->is_string()) throw std::runtime_error("parent_id is not a string");
    sample.parent_id = it->get<std::string>();
  }

  if (auto it = obj.find("entities"); it != obj.end()) {
    for (const OrderedJson& item : *it) {
      EntityAnn e;
      e.type = RequireString(item, "type");
      e.name = RequireString(item, "name");
      e.start = CharOffsetToByte(sample.text, RequireOffset(item, "start"),
                                 "entity start");
      e.end = CharOffsetToByte(sample.text, RequireOffset(item, "end"),
                               "entity end");
      sample.entities.push_back(std::move(e));
    }
  }
  if (auto it = obj.find("triples"); it != obj.end()) {
    for (const OrderedJson& item : *it) {
      TripleAnn t;
      t.relation = RequireString(item, "relation");
      t.head = RequireString(item, "head");
      t.tail = RequireString(item, "tail");
      if (auto f = item.find("head_start"); f != item.end() && !f->is_null()) {
        t.head_start = CharOffsetToByte(sample.text, RequireOffset(item, "head_start"),
                                        "head_start");
      }
      if (auto f = item.find("tail_start"); f != item.end() && !f->is_null()) {
        t.tail_start = CharOffsetToByte(sample.text, RequireOffset(item, "tail_start"),
                                        "tail_start");
      }
      sample.triples.push_back(std::move(t));
    }
  }
  if (auto it = obj.find("events"); it != obj.end()) {
    for (const OrderedJson& item : *it) {
      EventAnn e;
      e.event_type = RequireString(item, "event_type");
      e.trigger = RequireString(item, "trigger");
      e.trigger_start = CharOffsetToByte(
          sample.text, RequireOffset(item, "trigger_start"), "trigger_start");
      e.trigger_end = CharOffsetToByte(
          sample.text, RequireOffset(item, "trigger_end"), "trigger_end");
      sample.events.push_back(std::move(e));
    }
  }

  const std::vector<std::string> violations = ValidateSample(sample);
  if (!violations.empty()) {
    throw std::runtime_error(violations.front());
  }
  return sample;
}

std::vector<Sample> LoadSamples(const std::filesystem::path& path,
                                const Schema* schema) {
  const std::string data = ReadFile(path);
  std::vector<Sample> samples;
  std::vector<std::string> errors;
  size_t line_no = 0;
  for (const std::string& line : SplitLines(data)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      Sample sample = SampleFromJsonLine(line);
      if (schema != nullptr) {
        for (const std::string& v : ValidateSample(sample, schema)) {
          throw std::runtime_error(v);
        }
      }
      samples.push_back(std::move(sample));
    } catch (const std::exception& e) {
      errors.push_back("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!errors.empty()) {
    std::ostringstream msg;
    msg << path.string() << ": " << errors.size() << " invalid record(s)";
    for (const std::string& e : errors) { msg << "\n  " << e; }
    throw std::runtime_error(msg.str());
  }
  return samples;
}

void SaveSamples(const std::vector<Sample>& samples,
                 const std::filesystem::path& path) {
  std::string out;
  for (const Sample& sample : samples) {
    const std::vector<std::string> violations = ValidateSample(sample);
    if (!violations.empty()) {
      throw std::runtime_error("refusing to save invalid sample '" + sample.id +
                               "': " + violations.front());
    }
    out += SampleToJsonLine(sample);
    out += '\n';
  }
  WriteFileAtomic(path, out);
}

Schema LoadSchema(const std::filesystem::path& path) {
  OrderedJson obj;
  try {
    obj = OrderedJson::parse(ReadFile(path));
  } catch (const OrderedJson::parse_error& e) {
    throw std::runtime_error(path.string() + ": invalid JSON: " + e.what());
  }
  Schema schema;
  schema.dataset = RequireString(obj, "dataset");
  schema.task = TaskFromString(RequireString(obj, "task"));
  const OrderedJson& types = Require(obj, "types");
  std::set<std::string> seen;
  for (const OrderedJson& item : types) {
    SchemaType t;
    t.label = RequireString(item, "label");
    t.description = RequireString(item, "description");
    if (t.label.empty()) {
      throw std::runtime_error(path.string() + ": empty label");
    }
    if (!seen.insert(t.label).second) {
      throw std::runtime_error(path.string() + ": duplicate label: " + t.label);
    }
    schema.types.push_back(std::move(t));
  }
  if (schema.types.empty()) {
    throw std::runtime_error(path.string() + ": schema has no types");
  }
  return schema;
}

void SaveSchema(const Schema& schema, const std::filesystem::path& path) {
  OrderedJson obj;
  obj["dataset"] = schema.dataset;
  obj["task"] = std::string(TaskToString(schema.task));
  OrderedJson types = OrderedJson::array();
  for (const SchemaType& t : schema.types) {
    OrderedJson item;
    item["label"] = t.label;
    item["description"] = t.description;
    types.push_back(std::move(item));
  }
  obj["types"] = std::move(types);
  WriteFileAtomic(path, obj.dump(2) + "\n");
}

void CheckLabels(const std::vector<Sample>& samples, const Schema& schema) {
  std::vector<std::string> errors;
  for (const Sample& sample : samples) {
    for (const std::string& v : ValidateSample(sample, &schema)) {
      if (v.rfind("unknown label", 0) == 0) {
        errors.push_back("sample '" + sample.id + "': " + v);
      }
    }
  }
  if (!errors.empty()) {
    std::ostringstream msg;
    msg << errors.size() << " label error(s)";
    for (const std::string& e : errors) { msg << "\n  " << e; }
    throw std::runtime_error(msg.str());
  }
}

}  // namespace ieforge

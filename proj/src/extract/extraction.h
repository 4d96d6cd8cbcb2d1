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

#ifndef IEFORGE_SRC_EXTRACT_EXTRACTION_H_
#define IEFORGE_SRC_EXTRACT_EXTRACTION_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "corpus/types.h"
#include "llm/gateway.h"

namespace ieforge {

// Model predictions carry surfaces; offsets are optional extras that only
// in-process taggers fill in. The JSONL exchange format stays offset-free,
// so offsets never survive a save/load round trip.
struct PredEntity {
  std::string type;
  std::string name;
  std::optional<size_t> start;
  std::optional<size_t> end;
  bool operator==(const PredEntity&) const = default;
};

struct PredTriple {
  std::string relation;
  std::string head;
  std::string tail;
  bool operator==(const PredTriple&) const = default;
};

struct PredEvent {
  std::string event_type;
  std::string trigger;
  std::optional<size_t> trigger_start;
  std::optional<size_t> trigger_end;
  bool operator==(const PredEvent&) const = default;
};

// What one model call produced for one sample. When parsing failed the
// prediction lists are empty and raw_output holds the unusable text (or the
// gateway failure reason when no text ever arrived).
struct PredictionSet {
  std::string sample_id;
  std::vector<PredEntity> entities;
  std::vector<PredTriple> triples;
  std::vector<PredEvent> events;
  bool parse_ok = false;
  std::string raw_output;
  bool operator==(const PredictionSet&) const = default;
};

// Uniform random draw of k demonstrations from the pool, excluding any entry
// sharing the target sample's id. The pool is sorted by id before seeding so
// file layout cannot change the draw. Throws when fewer than k remain.
std::vector<Sample> SelectDemos(const std::vector<Sample>& pool,
                                const Sample& sample, size_t k, uint64_t seed);

// Few-shot prompt per the task's template: type descriptions, the first k
// demos as numbered Input/Output pairs with gold answers in the output
// format, then the test sentence. Throws when k exceeds the demo list or a
// demo shares the test sample's id.
std::string BuildFewshotPrompt(const Sample& sample, const Schema& schema,
                               const std::vector<Sample>& demos, size_t k);

// Gold annotations rendered exactly as the model is asked to answer:
// a compact JSON array of Type/Name, Head/Type/Tail, or Type/Trigger items.
std::string GoldOutputJson(const Sample& sample);

// Tolerant parse of free-form model output: the first JSON array found is
// read item by item, unknown keys are ignored, items missing a required key
// are dropped (counted in *dropped when given), duplicates collapse to one.
// No array at all means parse_ok=false with empty lists. Never throws.
PredictionSet ParseModelOutput(const std::string& raw, Task task,
                               size_t* dropped = nullptr);

struct ExtractionOptions {
  size_t shots = 10;
  uint64_t seed = 0;
  int workers = 4;  // per-sample parallelism; the gateway bounds the wire
};

// Runs few-shot extraction over the corpus, one request per sample, demos
// drawn from train_pool. Returns one PredictionSet per sample, sorted by
// sample id. Gateway failures for a sample are recorded as parse_ok=false;
// the run continues.
std::vector<PredictionSet> RunExtraction(const std::vector<Sample>& corpus,
                                         const Schema& schema,
                                         const std::vector<Sample>& train_pool,
                                         LlmGateway& gateway,
                                         const ExtractionOptions& options);

// Predictions travel as JSONL, one object per set, fixed key order:
// {"sample_id","entities","triples","events","parse_ok","raw_output"}.
std::string PredictionToJsonLine(const PredictionSet& set);
PredictionSet PredictionFromJsonLine(const std::string& line);
void SavePredictions(const std::string& path,
                     const std::vector<PredictionSet>& sets);
std::vector<PredictionSet> LoadPredictions(const std::string& path);

}  // namespace ieforge

#endif  // IEFORGE_SRC_EXTRACT_EXTRACTION_H_

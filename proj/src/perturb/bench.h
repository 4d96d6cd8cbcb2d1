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

#ifndef IEFORGE_PERTURB_BENCH_H_
#define IEFORGE_PERTURB_BENCH_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "corpus/types.h"
#include "llm/gateway.h"
#include "perturb/llm_perturb.h"
#include "perturb/perturb.h"

namespace ieforge {

// One dataset feeding the benchmark. `quota` originals are drawn from the
// corpus by stratified sampling, then every operator produces one row per
// drawn original.
struct BenchDataset {
  std::string name;
  std::vector<Sample> corpus;
  Schema schema;
  size_t quota = 0;
};

struct BuildOptions {
  uint64_t seed = 0;
  size_t workers = 4;
  TypoConfig typo;
  LlmPerturbOptions generation;
  // Operator override per task; an absent task gets KindsForTask.
  std::map<Task, std::vector<Perturbation>> kinds;
};

// One benchmark split: the drawn originals under tag "none", or one row per
// original under an operator tag. A row whose child was rejected or
// unperturbable carries the original byte-identically, so split sizes never
// vary.
struct BenchSplit {
  std::string dataset;
  Task task = Task::kNer;
  std::string tag;
  std::vector<Sample> rows;
};

struct DatasetCounts {
  std::string dataset;
  Task task = Task::kNer;
  size_t originals = 0;
  size_t adversarial_rows = 0;  // rows across the operator splits
  size_t perturbed = 0;         // genuinely rewritten rows
  size_t carried_over = 0;      // originals standing in for failed children
  std::map<std::string, size_t> rows_per_split;
};

struct BuildReport {
  std::vector<DatasetCounts> datasets;
  std::vector<std::string> rejected;       // child ids out of attempts
  std::vector<std::string> unperturbable;  // child ids with nothing to edit
  std::map<int, uint64_t> attempt_histogram;
  uint64_t total_adversarial = 0;
};

struct BenchResult {
  std::vector<BenchSplit> splits;  // per dataset: "none" first, then operators
  BuildReport report;
};

// Assembles the benchmark. The gateway may be null when every requested
// operator is rule-based. Children are generated in parallel; every random
// choice is seeded from (dataset, sample id, operator), so worker scheduling
// cannot change the output. Gateway errors propagate.
// Throws std::invalid_argument for an infeasible quota, a duplicate or
// task-mismatched operator list, a duplicate dataset name, a corpus sample
// off the dataset schema, or a model-backed operator without a gateway.
BenchResult BuildBench(const std::vector<BenchDataset>& datasets,
                       LlmGateway* gateway, const BuildOptions& options);

std::string BuildReportToJson(const BuildReport& report);

}  // namespace ieforge

#endif  // IEFORGE_PERTURB_BENCH_H_

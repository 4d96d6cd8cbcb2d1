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

#include "perturb/bench.h"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <utility>

#include "json.hpp"
#include "corpus/corpus.h"
#include "corpus/sampling.h"
#include "util/parallel.h"
#include "util/rng.h"

namespace ieforge {
namespace {

using ordered_json = nlohmann::ordered_json;

bool NeedsModel(Perturbation kind) {
  switch (PerturbationMethod(kind)) {
    case PerturbMethod::kReplaceMention:
    case PerturbMethod::kChangeContext:
    case PerturbMethod::kExtendSentence:
      return true;
    case PerturbMethod::kTypoInjection:
    case PerturbMethod::kLowercaseConversion:
      return false;
  }
  return false;
}

std::vector<Perturbation> KindsFor(const BenchDataset& ds,
                                   const BuildOptions& options) {
  const Task task = ds.schema.task;
  const auto it = options.kinds.find(task);
  const std::vector<Perturbation> kinds =
      it != options.kinds.end() ? it->second : KindsForTask(task);
  if (kinds.empty()) {
    throw std::invalid_argument("dataset '" + ds.name + "': empty operator list");
  }
  std::set<Perturbation> seen;
  for (Perturbation kind : kinds) {
    if (PerturbationTask(kind) != task) {
      throw std::invalid_argument(
          "dataset '" + ds.name + "': operator " + PerturbationToString(kind) +
          " does not apply to task " + std::string(TaskToString(task)));
    }
    if (!seen.insert(kind).second) {
      throw std::invalid_argument("dataset '" + ds.name + "': operator " +
                                  PerturbationToString(kind) + " listed twice");
    }
  }
  return kinds;
}

void CheckDataset(const BenchDataset& ds) {
  if (ds.name.empty()) {
    throw std::invalid_argument("dataset with an empty name");
  }
  for (const Sample& s : ds.corpus) {
    if (s.task != ds.schema.task) {
      throw std::invalid_argument("dataset '" + ds.name + "': sample '" + s.id +
                                  "' does not match the schema task");
    }
  }
  CheckLabels(ds.corpus, ds.schema);
  if (ds.quota == 0 || ds.quota > ds.corpus.size()) {
    throw std::invalid_argument(
        "dataset '" + ds.name + "': quota " + std::to_string(ds.quota) +
        " infeasible for a corpus of " + std::to_string(ds.corpus.size()));
  }
}

PerturbOutcome MakeOutcome(Perturbation kind, const Sample& parent,
                           LlmGateway* gateway, uint64_t dataset_seed,
                           const BuildOptions& options) {
  switch (PerturbationMethod(kind)) {
    case PerturbMethod::kTypoInjection:
      return TypoInject(
          parent, options.typo,
          DeriveSeed(dataset_seed, {parent.id, PerturbationToString(kind)}));
    case PerturbMethod::kLowercaseConversion:
      return LowercaseConvert(parent);
    default:
      // LlmPerturb splits the seed by sample id and tag internally.
      return LlmPerturb(kind, parent, *gateway, dataset_seed,
                        options.generation);
  }
}

}  // namespace

BenchResult BuildBench(const std::vector<BenchDataset>& datasets,
                       LlmGateway* gateway, const BuildOptions& options) {
  if (options.generation.max_attempts < 1) {
    throw std::invalid_argument("max_attempts must be at least 1");
  }
  std::set<std::string> names;
  for (const BenchDataset& ds : datasets) {
    CheckDataset(ds);
    if (!names.insert(ds.name).second) {
      throw std::invalid_argument("duplicate dataset name '" + ds.name + "'");
    }
    for (Perturbation kind : KindsFor(ds, options)) {
      if (NeedsModel(kind) && gateway == nullptr) {
        throw std::invalid_argument("dataset '" + ds.name + "': operator " +
                                    PerturbationToString(kind) +
                                    " needs a gateway");
      }
    }
  }

  BenchResult result;
  for (const BenchDataset& ds : datasets) {
    const Task task = ds.schema.task;
    const std::vector<Perturbation> kinds = KindsFor(ds, options);
    const std::vector<Sample> originals = StratifiedSample(
        ds.corpus, ds.quota, DeriveSeed(options.seed, {"sample", ds.name}));
    const uint64_t dataset_seed = DeriveSeed(options.seed, {"perturb", ds.name});

    DatasetCounts counts;
    counts.dataset = ds.name;
    counts.task = task;
    counts.originals = originals.size();
    counts.rows_per_split["none"] = originals.size();
    result.splits.push_back({ds.name, task, "none", originals});

    for (Perturbation kind : kinds) {
      const std::string tag = PerturbationToString(kind);
      std::vector<PerturbOutcome> outcomes(originals.size());
      ParallelFor(originals.size(), options.workers, [&](size_t i) {
        outcomes[i] =
            MakeOutcome(kind, originals[i], gateway, dataset_seed, options);
      });

      BenchSplit split{ds.name, task, tag, {}};
      split.rows.reserve(originals.size());
      for (size_t i = 0; i < originals.size(); ++i) {
        PerturbOutcome& out = outcomes[i];
        ++result.report.attempt_histogram[out.attempts];
        if (out.status == PerturbOutcome::Status::kPerturbed) {
          split.rows.push_back(std::move(*out.sample));
          ++counts.perturbed;
        } else {
          // Constant split sizes: the original stands in for the child.
          split.rows.push_back(originals[i]);
          ++counts.carried_over;
          auto& ids = out.status == PerturbOutcome::Status::kRejected
                          ? result.report.rejected
                          : result.report.unperturbable;
          ids.push_back(ChildId(originals[i], kind));
        }
      }
      counts.adversarial_rows += split.rows.size();
      counts.rows_per_split[tag] = split.rows.size();
      result.splits.push_back(std::move(split));
    }
    result.report.total_adversarial += counts.adversarial_rows;
    result.report.datasets.push_back(std::move(counts));
  }
  std::sort(result.report.rejected.begin(), result.report.rejected.end());
  std::sort(result.report.unperturbable.begin(),
            result.report.unperturbable.end());
  return result;
}

std::string BuildReportToJson(const BuildReport& report) {
  ordered_json j;
  j["datasets"] = ordered_json::array();
  for (const DatasetCounts& d : report.datasets) {
    ordered_json splits = ordered_json::object();
    for (const auto& [tag, n] : d.rows_per_split) splits[tag] = n;
    j["datasets"].push_back({{"dataset", d.dataset},
                             {"task", std::string(TaskToString(d.task))},
                             {"originals", d.originals},
                             {"adversarial_rows", d.adversarial_rows},
                             {"perturbed", d.perturbed},
                             {"carried_over", d.carried_over},
                             {"rows_per_split", std::move(splits)}});
  }
  j["rejected"] = report.rejected;
  j["unperturbable"] = report.unperturbable;
  j["attempt_histogram"] = ordered_json::object();
  for (const auto& [attempts, n] : report.attempt_histogram) {
    j["attempt_histogram"][std::to_string(attempts)] = n;
  }
  j["total_adversarial"] = report.total_adversarial;
  return j.dump(2);
}

}  // namespace ieforge

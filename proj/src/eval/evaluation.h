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

#ifndef IEFORGE_SRC_EVAL_EVALUATION_H_
#define IEFORGE_SRC_EVAL_EVALUATION_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "corpus/types.h"
#include "extract/extraction.h"

namespace ieforge {

// Pooled true positives, false positives and false negatives.
struct Counts {
  int64_t tp = 0;
  int64_t fp = 0;
  int64_t fn = 0;

  Counts& operator+=(const Counts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  bool operator==(const Counts&) const = default;
};

// How predicted items are keyed against gold annotations.
//   kString: entities match on (type, name); triples on (relation, head,
//     tail); events on (event type, trigger). Surfaces are trimmed first.
//   kStrictOffset: entity identity becomes (type, start, end), so entity
//     predictions must carry offsets; anything else keeps its string key.
enum class MatchMode { kString, kStrictOffset };

// Multiset intersection between one sample's gold items and one prediction
// set. Duplicate keys pair up one-for-one: tp = matched pairs, fp = leftover
// predictions, fn = leftover gold items. Throws when strict-offset mode
// meets an entity prediction without offsets.
Counts MatchItems(const Sample& gold, const PredictionSet& pred,
                  MatchMode mode = MatchMode::kString);

struct PrMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Micro-averaged metrics over pooled counts, in [0,1]. Zero denominators
// yield 0 instead of NaN. Throws on negative counts.
PrMetrics MicroF1(const Counts& total);
PrMetrics MicroF1(const std::vector<Counts>& per_sample);

// Mean relative score drop under perturbation, as a percentage of the clean
// score: 100 * (clean - mean(perturbed)) / clean. Scale-free, so callers may
// pass fractions or percentages as long as both sides agree. Throws when the
// clean score is not positive or the list is empty.
double DropAvg(double f1_clean, const std::vector<double>& f1_perturbed);

// Half-away-from-zero rounding to one decimal, the tables' print precision.
double Round1(double x);

// F1 percentages keyed by group (task or dataset), then by perturbation tag
// ("none" plus "P1".."P14").
using ScoreGrid = std::map<std::string, std::map<std::string, double>>;

// One system's scorecard. rank stays 0 until RankReports assigns one.
struct EvalReport {
  std::string model;
  ScoreGrid grid;
  std::map<std::string, double> drop_avg;
  double overall_avg = 0.0;
  int rank = 0;

  bool operator==(const EvalReport&) const = default;
};

// Fills in drop_avg (per group with at least one perturbed cell) and
// overall_avg (unweighted mean over every cell, the clean column included).
// Throws when a group lacks its "none" cell.
EvalReport MakeReport(const std::string& model, const ScoreGrid& grid);

// Sorts descending by overall average and assigns competition ranks
// (1, 1, 3, ...) computed on averages rounded to one decimal, so systems
// that print the same score share a rank. All reports must cover identical
// grid cells; mismatched grids throw.
void RankReports(std::vector<EvalReport>* reports);

// Per-cell change against the group's "none" column (perturbed - clean),
// the heatmap payload. Throws when a baseline cell is missing.
ScoreGrid DeltaGrid(const EvalReport& report);

// Which sample field names a grid group.
enum class GroupBy { kTask, kDataset };

// Scores predictions against gold samples, pooling counts per grid cell.
// Samples and prediction sets must pair one-to-one by id; a missing, extra
// or duplicated id throws.
ScoreGrid ScoreCorpus(const std::vector<Sample>& gold,
                      const std::vector<PredictionSet>& preds,
                      MatchMode mode = MatchMode::kString,
                      GroupBy group_by = GroupBy::kTask);

// Comparison table as CSV: one row per model. Per group the columns run
// "none" first, P-tags numerically, then that group's drop average; the
// overall average and rank close the row. All reports must share one grid
// shape.
std::string ReportTableCsv(const std::vector<EvalReport>& reports);

// The same table rendered as GitHub-flavored Markdown, same column order.
std::string ReportTableMarkdown(const std::vector<EvalReport>& reports);

// The same table as a JSON array for downstream tooling.
std::string ReportTableJson(const std::vector<EvalReport>& reports);

// One model's deltas as CSV: a row per group, a column per perturbed tag in
// the union across groups (blank where a group lacks the tag). Negative
// values are drops, positive are improvements.
std::string HeatmapCsv(const EvalReport& report);

}  // namespace ieforge

#endif  // IEFORGE_SRC_EVAL_EVALUATION_H_

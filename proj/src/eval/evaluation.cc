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

#include "eval/evaluation.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <utility>

#include "nlohmann/json.hpp"
#include "util/text.h"

namespace ieforge {
namespace {

constexpr char kSep = '\x1f';

// All surfaces are trimmed before keying. Unicode normalization beyond that
// is out of scope; the corpora are ASCII-dominant news text.
std::string Norm(const std::string& s) { return Trim(s); }

std::string EntityStringKey(const std::string& type, const std::string& name) {
  return Norm(type) + kSep + Norm(name);
}

std::string EntityOffsetKey(const std::string& type, size_t start, size_t end) {
  return Norm(type) + kSep + std::to_string(start) + kSep + std::to_string(end);
}

std::string TripleKey(const std::string& relation, const std::string& head,
                      const std::string& tail) {
  return Norm(relation) + kSep + Norm(head) + kSep + Norm(tail);
}

std::string EventKey(const std::string& type, const std::string& trigger) {
  return Norm(type) + kSep + Norm(trigger);
}

// Greedy multiset pairing: every predicted key consumes at most one equal
// gold key. With exact-key equality this is a maximum matching.
Counts PairKeys(std::vector<std::string> gold, const std::vector<std::string>& pred) {
  std::multiset<std::string> unmatched(gold.begin(), gold.end());
  Counts c;
  for (const auto& key : pred) {
    auto it = unmatched.find(key);
    if (it != unmatched.end()) {
      unmatched.erase(it);
      ++c.tp;
    } else {
      ++c.fp;
    }
  }
  c.fn = static_cast<int64_t>(unmatched.size());
  return c;
}

int TagRank(const std::string& tag) {
  if (tag == "none") return -1;
  if (tag.size() >= 2 && tag[0] == 'P') {
    int n = 0;
    for (size_t i = 1; i < tag.size(); ++i) {
      if (tag[i] < '0' || tag[i] > '9') return std::numeric_limits<int>::max();
      n = n * 10 + (tag[i] - '0');
    }
    return n;
  }
  return std::numeric_limits<int>::max();
}

// "none" first, then P-tags numerically, then anything else by name.
bool TagLess(const std::string& a, const std::string& b) {
  int ra = TagRank(a), rb = TagRank(b);
  if (ra != rb) return ra < rb;
  return a < b;
}

std::vector<std::string> SortedTags(const std::map<std::string, double>& cells) {
  std::vector<std::string> tags;
  tags.reserve(cells.size());
  for (const auto& [tag, f1] : cells) tags.push_back(tag);
  std::sort(tags.begin(), tags.end(), TagLess);
  return tags;
}

// (group, tag) shape of a grid, for the same-cells precondition.
std::vector<std::pair<std::string, std::string>> GridShape(const ScoreGrid& grid) {
  std::vector<std::pair<std::string, std::string>> shape;
  for (const auto& [group, cells] : grid)
    for (const auto& [tag, f1] : cells) shape.emplace_back(group, tag);
  return shape;
}

std::string Format1(double x) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.1f", x);
  return buf;
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

Counts MatchItems(const Sample& gold, const PredictionSet& pred, MatchMode mode) {
  std::vector<std::string> want;
  std::vector<std::string> got;
  switch (gold.task) {
    case Task::kNer:
      for (const auto& e : gold.entities) {
        want.push_back(mode == MatchMode::kStrictOffset
                           ? EntityOffsetKey(e.type, e.start, e.end)
                           : EntityStringKey(e.type, e.name));
      }
      for (const auto& e : pred.entities) {
        if (mode == MatchMode::kStrictOffset) {
          if (!e.start.has_value() || !e.end.has_value()) {
            throw std::invalid_argument(
                "strict-offset matching needs entity offsets, prediction \"" +
                e.name + "\" for sample \"" + gold.id + "\" has none");
          }
          got.push_back(EntityOffsetKey(e.type, *e.start, *e.end));
        } else {
          got.push_back(EntityStringKey(e.type, e.name));
        }
      }
      break;
    case Task::kRe:
      for (const auto& t : gold.triples) want.push_back(TripleKey(t.relation, t.head, t.tail));
      for (const auto& t : pred.triples) got.push_back(TripleKey(t.relation, t.head, t.tail));
      break;
    case Task::kEd:
      for (const auto& e : gold.events) want.push_back(EventKey(e.event_type, e.trigger));
      for (const auto& e : pred.events) got.push_back(EventKey(e.event_type, e.trigger));
      break;
  }
  return PairKeys(std::move(want), got);
}

PrMetrics MicroF1(const Counts& total) {
  if (total.tp < 0 || total.fp < 0 || total.fn < 0)
    throw std::invalid_argument("negative counts");
  PrMetrics m;
  const double tp = static_cast<double>(total.tp);
  if (total.tp + total.fp > 0) m.precision = tp / static_cast<double>(total.tp + total.fp);
  if (total.tp + total.fn > 0) m.recall = tp / static_cast<double>(total.tp + total.fn);
  if (m.precision + m.recall > 0.0)
    m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
  return m;
}

PrMetrics MicroF1(const std::vector<Counts>& per_sample) {
  Counts total;
  for (const auto& c : per_sample) total += c;
  return MicroF1(total);
}

double DropAvg(double f1_clean, const std::vector<double>& f1_perturbed) {
  if (!(f1_clean > 0.0))
    throw std::invalid_argument("relative drop needs a positive clean score");
  if (f1_perturbed.empty())
    throw std::invalid_argument("relative drop needs at least one perturbed score");
  const double mean =
      std::accumulate(f1_perturbed.begin(), f1_perturbed.end(), 0.0) /
      static_cast<double>(f1_perturbed.size());
  return 100.0 * (f1_clean - mean) / f1_clean;
}

double Round1(double x) { return std::round(x * 10.0) / 10.0; }

EvalReport MakeReport(const std::string& model, const ScoreGrid& grid) {
  EvalReport report;
  report.model = model;
  report.grid = grid;
  double sum = 0.0;
  size_t cells = 0;
  for (const auto& [group, row] : grid) {
    auto none = row.find("none");
    if (none == row.end())
      throw std::invalid_argument("group \"" + group + "\" has no unperturbed cell");
    std::vector<double> perturbed;
    for (const auto& [tag, f1] : row) {
      sum += f1;
      ++cells;
      if (tag != "none") perturbed.push_back(f1);
    }
    if (!perturbed.empty())
      report.drop_avg[group] = DropAvg(none->second, perturbed);
  }
  if (cells > 0) report.overall_avg = sum / static_cast<double>(cells);
  return report;
}

void RankReports(std::vector<EvalReport>* reports) {
  if (reports->empty()) return;
  const auto shape = GridShape(reports->front().grid);
  for (const auto& r : *reports) {
    if (GridShape(r.grid) != shape) {
      throw std::invalid_argument("report \"" + r.model + "\" covers different grid cells than \"" +
                                  reports->front().model + "\"");
    }
  }
  std::stable_sort(reports->begin(), reports->end(),
                   [](const EvalReport& a, const EvalReport& b) {
                     return a.overall_avg > b.overall_avg;
                   });
  // Ranks are assigned on printed (one-decimal) averages, so two systems
  // that display the same score tie and the next rank skips (1, 1, 3).
  for (size_t i = 0; i < reports->size(); ++i) {
    const double mine = Round1((*reports)[i].overall_avg);
    int ahead = 0;
    for (size_t j = 0; j < reports->size(); ++j)
      if (Round1((*reports)[j].overall_avg) > mine) ++ahead;
    (*reports)[i].rank = ahead + 1;
  }
}

ScoreGrid DeltaGrid(const EvalReport& report) {
  ScoreGrid out;
  for (const auto& [group, row] : report.grid) {
    auto none = row.find("none");
    if (none == row.end())
      throw std::invalid_argument("group \"" + group + "\" has no unperturbed cell");
    for (const auto& [tag, f1] : row)
      if (tag != "none") out[group][tag] = f1 - none->second;
  }
  return out;
}

ScoreGrid ScoreCorpus(const std::vector<Sample>& gold,
                      const std::vector<PredictionSet>& preds, MatchMode mode,
                      GroupBy group_by) {
  std::unordered_map<std::string, const PredictionSet*> by_id;
  by_id.reserve(preds.size());
  for (const auto& p : preds) {
    if (!by_id.emplace(p.sample_id, &p).second)
      throw std::invalid_argument("duplicate prediction for sample \"" + p.sample_id + "\"");
  }
  std::map<std::string, std::map<std::string, Counts>> cells;
  std::set<std::string> seen;
  for (const auto& s : gold) {
    if (!seen.insert(s.id).second)
      throw std::invalid_argument("duplicate gold sample \"" + s.id + "\"");
    auto it = by_id.find(s.id);
    if (it == by_id.end())
      throw std::invalid_argument("no prediction for sample \"" + s.id + "\"");
    const std::string group =
        group_by == GroupBy::kTask ? std::string(TaskToString(s.task)) : s.dataset;
    cells[group][PerturbationToString(s.perturbation)] += MatchItems(s, *it->second, mode);
  }
  for (const auto& p : preds) {
    if (!seen.count(p.sample_id))
      throw std::invalid_argument("prediction for unknown sample \"" + p.sample_id + "\"");
  }
  ScoreGrid grid;
  for (const auto& [group, row] : cells)
    for (const auto& [tag, counts] : row) grid[group][tag] = 100.0 * MicroF1(counts).f1;
  return grid;
}

namespace {

// Header labels and the per-model value row, in the fixed table order:
// per group "none", P-tags, drop average; then the overall average and rank.
std::vector<std::string> TableHeader(const EvalReport& first) {
  std::vector<std::string> cols = {"model"};
  for (const auto& [group, row] : first.grid) {
    for (const auto& tag : SortedTags(row)) cols.push_back(group + ":" + tag);
    if (first.drop_avg.count(group)) cols.push_back(group + ":drop_avg");
  }
  cols.push_back("overall_avg");
  cols.push_back("rank");
  return cols;
}

std::vector<std::string> TableRow(const EvalReport& r) {
  std::vector<std::string> cells = {r.model};
  for (const auto& [group, row] : r.grid) {
    for (const auto& tag : SortedTags(row)) cells.push_back(Format1(row.at(tag)));
    if (r.drop_avg.count(group)) cells.push_back(Format1(r.drop_avg.at(group)));
  }
  cells.push_back(Format1(r.overall_avg));
  cells.push_back(std::to_string(r.rank));
  return cells;
}

void CheckSameShape(const std::vector<EvalReport>& reports) {
  const auto shape = GridShape(reports.front().grid);
  for (const auto& r : reports) {
    if (GridShape(r.grid) != shape)
      throw std::invalid_argument("report \"" + r.model + "\" covers different grid cells");
  }
}

std::string MdCell(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '|') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string ReportTableCsv(const std::vector<EvalReport>& reports) {
  if (reports.empty()) return "model\n";
  CheckSameShape(reports);
  std::string out;
  const auto header = TableHeader(reports.front());
  for (size_t i = 0; i < header.size(); ++i)
    out += (i ? "," : "") + CsvField(header[i]);
  out += '\n';
  for (const auto& r : reports) {
    const auto cells = TableRow(r);
    for (size_t i = 0; i < cells.size(); ++i)
      out += (i ? "," : "") + CsvField(cells[i]);
    out += '\n';
  }
  return out;
}

std::string ReportTableMarkdown(const std::vector<EvalReport>& reports) {
  if (reports.empty()) return "| model |\n| :--- |\n";
  CheckSameShape(reports);
  const auto header = TableHeader(reports.front());
  std::string out = "|";
  for (const auto& col : header) out += " " + MdCell(col) + " |";
  out += "\n|";
  for (size_t i = 0; i < header.size(); ++i) out += i == 0 ? " :--- |" : " ---: |";
  out += '\n';
  for (const auto& r : reports) {
    out += "|";
    for (const auto& cell : TableRow(r)) out += " " + MdCell(cell) + " |";
    out += '\n';
  }
  return out;
}

std::string HeatmapCsv(const EvalReport& report) {
  const ScoreGrid delta = DeltaGrid(report);
  std::set<std::string, decltype(&TagLess)> tags(&TagLess);
  for (const auto& [group, row] : delta)
    for (const auto& [tag, d] : row) tags.insert(tag);
  std::string out = "group";
  for (const auto& tag : tags) out += "," + CsvField(tag);
  out += '\n';
  for (const auto& [group, row] : delta) {
    out += CsvField(group);
    for (const auto& tag : tags) {
      auto it = row.find(tag);
      out += ",";
      if (it != row.end()) out += Format1(it->second);
    }
    out += '\n';
  }
  return out;
}

std::string ReportTableJson(const std::vector<EvalReport>& reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : reports) {
    nlohmann::json j;
    j["model"] = r.model;
    j["grid"] = nlohmann::json::object();
    for (const auto& [group, row] : r.grid) {
      for (const auto& tag : SortedTags(row)) j["grid"][group][tag] = Round1(row.at(tag));
    }
    j["drop_avg"] = nlohmann::json::object();
    for (const auto& [group, drop] : r.drop_avg) j["drop_avg"][group] = Round1(drop);
    j["overall_avg"] = Round1(r.overall_avg);
    j["rank"] = r.rank;
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

}  // namespace ieforge

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

#include "lda/external_trainer.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <unordered_map>

#include "corpus/corpus.h"
#include "util/fsio.h"
#include "util/subprocess.h"
#include "util/text.h"

namespace ieforge {
namespace {

namespace fs = std::filesystem;

std::string Excerpt(const std::string& s, size_t limit = 400) {
  if (s.size() <= limit) return s;
  return s.substr(0, limit) + "...";
}

double ParseLossField(const std::string& field, const fs::path& file, size_t line_no) {
  size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(field, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != field.size() || !std::isfinite(value) || value < 0.0) {
    throw std::runtime_error(file.string() + ": line " + std::to_string(line_no) +
                             ": bad loss value \"" + field + "\"");
  }
  return value;
}

}  // namespace

ExternalTrainer::ExternalTrainer(ExternalTrainerConfig config)
    : config_(std::move(config)) {
  if (config_.command.empty())
    throw std::invalid_argument("external trainer needs a command");
  if (config_.work_dir.empty())
    throw std::invalid_argument("external trainer needs a work directory");
  EnsureDir(config_.work_dir);
}

std::string ExternalTrainer::NewRunDir() {
  // Skips over directories left by a previous process so resumed runs never
  // clobber the handles their checkpoint still references.
  for (;; ++next_run_) {
    char name[16];
    std::snprintf(name, sizeof(name), "run%03d", next_run_);
    const fs::path dir = fs::path(config_.work_dir) / name;
    if (!fs::exists(dir)) {
      EnsureDir(dir);
      ++next_run_;
      return dir.string();
    }
  }
}

void ExternalTrainer::Run(const std::string& verb, const std::string& run_dir) {
  const auto result = RunProcess({config_.command, verb, run_dir}, "", config_.timeout_s);
  if (result.timed_out) {
    throw std::runtime_error("trainer command \"" + config_.command + " " + verb +
                             "\" timed out after " + std::to_string(config_.timeout_s) +
                             "s in " + run_dir);
  }
  if (result.exit_code != 0) {
    throw std::runtime_error("trainer command \"" + config_.command + " " + verb +
                             "\" exited with " + std::to_string(result.exit_code) +
                             ": " + Excerpt(result.stderr_output));
  }
}

std::string ExternalTrainer::ReadModelRef(const std::string& run_dir) const {
  const fs::path ref = fs::path(run_dir) / "model.ref";
  if (!fs::exists(ref))
    throw std::runtime_error("trainer wrote no " + ref.string());
  const std::string content = Trim(ReadFile(ref));
  if (content.empty())
    throw std::runtime_error(ref.string() + " is empty");
  return content;
}

std::string ExternalTrainer::Train(const std::vector<Sample>& data) {
  if (data.empty()) throw std::invalid_argument("empty training data");
  const std::string dir = NewRunDir();
  SaveSamples(data, fs::path(dir) / "train.jsonl");
  Run("train", dir);
  ReadModelRef(dir);
  return dir;
}

std::string ExternalTrainer::Finetune(const std::string& model,
                                      const std::vector<Sample>& data) {
  if (data.empty()) throw std::invalid_argument("empty retraining data");
  const std::string parent_ref = ReadModelRef(model);
  const std::string dir = NewRunDir();
  WriteFileAtomic(fs::path(dir) / "parent.ref", parent_ref + "\n");
  SaveSamples(data, fs::path(dir) / "retrain.jsonl");
  Run("finetune", dir);
  ReadModelRef(dir);
  return dir;
}

std::vector<LossRecord> ExternalTrainer::BatchLoss(
    const std::string& model, const std::vector<Sample>& samples) {
  if (samples.empty()) return {};
  ReadModelRef(model);
  SaveSamples(samples, fs::path(model) / "samples.jsonl");
  Run("loss", model);

  const fs::path file = fs::path(model) / "losses.tsv";
  if (!fs::exists(file))
    throw std::runtime_error("trainer wrote no " + file.string());
  std::unordered_map<std::string, double> by_id;
  size_t line_no = 0;
  for (const auto& line : SplitLines(ReadFile(file))) {
    ++line_no;
    if (line.empty()) continue;
    const size_t tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw std::runtime_error(file.string() + ": line " + std::to_string(line_no) +
                               ": expected sample_id TAB loss");
    }
    const std::string id = line.substr(0, tab);
    if (!by_id.emplace(id, ParseLossField(line.substr(tab + 1), file, line_no)).second)
      throw std::runtime_error(file.string() + ": duplicate sample \"" + id + "\"");
  }
  std::vector<LossRecord> records;
  records.reserve(samples.size());
  for (const auto& s : samples) {
    auto it = by_id.find(s.id);
    if (it == by_id.end())
      throw std::runtime_error(file.string() + ": no loss for sample \"" + s.id + "\"");
    records.push_back({s.id, it->second});
  }
  if (by_id.size() != samples.size())
    throw std::runtime_error(file.string() + ": has losses for unknown samples");
  return records;
}

std::vector<PredictionSet> ExternalTrainer::BatchPredict(
    const std::string& model, const std::vector<Sample>& samples) {
  if (samples.empty()) return {};
  ReadModelRef(model);
  SaveSamples(samples, fs::path(model) / "samples.jsonl");
  Run("predict", model);

  const fs::path file = fs::path(model) / "predictions.jsonl";
  if (!fs::exists(file))
    throw std::runtime_error("trainer wrote no " + file.string());
  auto loaded = LoadPredictions(file.string());
  std::unordered_map<std::string, PredictionSet*> by_id;
  for (auto& p : loaded) {
    if (!by_id.emplace(p.sample_id, &p).second)
      throw std::runtime_error(file.string() + ": duplicate sample \"" +
                               p.sample_id + "\"");
  }
  std::vector<PredictionSet> preds;
  preds.reserve(samples.size());
  for (const auto& s : samples) {
    auto it = by_id.find(s.id);
    if (it == by_id.end())
      throw std::runtime_error(file.string() + ": no prediction for sample \"" +
                               s.id + "\"");
    preds.push_back(std::move(*it->second));
  }
  if (by_id.size() != samples.size())
    throw std::runtime_error(file.string() + ": has predictions for unknown samples");
  return preds;
}

double ExternalTrainer::Loss(const std::string& model, const Sample& sample) {
  return BatchLoss(model, {sample}).at(0).loss;
}

PredictionSet ExternalTrainer::Predict(const std::string& model,
                                       const Sample& sample) {
  return BatchPredict(model, {sample}).at(0);
}

}  // namespace ieforge

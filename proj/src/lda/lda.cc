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

#include "lda/lda.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "eval/evaluation.h"
#include "nlohmann/json.hpp"
#include "util/fsio.h"

namespace ieforge {
namespace {

namespace fs = std::filesystem;

std::set<std::string> IdSet(const std::vector<Sample>& samples) {
  std::set<std::string> ids;
  for (const auto& s : samples) ids.insert(s.id);
  return ids;
}

void RequireDisjoint(const std::set<std::string>& val_ids,
                     const std::vector<Sample>& training, const char* what) {
  for (const auto& s : training) {
    if (val_ids.count(s.id)) {
      throw std::invalid_argument("validation sample \"" + s.id +
                                  "\" also appears in " + what);
    }
  }
}

fs::path StatePath(const LdaConfig& cfg) {
  return fs::path(cfg.state_dir) / "state.json";
}

void Checkpoint(const LdaConfig& cfg, const LdaState& state) {
  if (cfg.state_dir.empty()) return;
  EnsureDir(cfg.state_dir);
  WriteFileAtomic(StatePath(cfg), LdaStateToJson(state));
}

}  // namespace

std::vector<LossRecord> TrainerProtocol::BatchLoss(
    const std::string& model, const std::vector<Sample>& samples) {
  std::vector<LossRecord> records;
  records.reserve(samples.size());
  for (const auto& s : samples) records.push_back({s.id, Loss(model, s)});
  return records;
}

std::vector<PredictionSet> TrainerProtocol::BatchPredict(
    const std::string& model, const std::vector<Sample>& samples) {
  std::vector<PredictionSet> preds;
  preds.reserve(samples.size());
  for (const auto& s : samples) preds.push_back(Predict(model, s));
  return preds;
}

std::vector<LossRecord> ComputeLosses(TrainerProtocol* trainer,
                                      const std::string& model,
                                      const std::vector<Sample>& samples) {
  if (samples.empty()) return {};
  auto records = trainer->BatchLoss(model, samples);
  if (records.size() != samples.size())
    throw std::runtime_error("trainer returned " + std::to_string(records.size()) +
                             " losses for " + std::to_string(samples.size()) +
                             " samples");
  for (size_t i = 0; i < records.size(); ++i) {
    if (records[i].sample_id != samples[i].id)
      throw std::runtime_error("loss order mismatch at index " + std::to_string(i) +
                               ": got \"" + records[i].sample_id + "\", expected \"" +
                               samples[i].id + "\"");
    if (!std::isfinite(records[i].loss) || records[i].loss < 0.0)
      throw std::runtime_error("invalid loss for sample \"" + records[i].sample_id +
                               "\"");
  }
  return records;
}

std::vector<std::string> SelectTopBeta(const std::vector<LossRecord>& records,
                                       double beta) {
  if (records.empty())
    throw std::invalid_argument("no loss records to select from");
  if (!(beta > 0.0) || beta > 1.0)
    throw std::invalid_argument("selection ratio must be in (0, 1]");
  std::vector<const LossRecord*> order;
  order.reserve(records.size());
  for (const auto& r : records) order.push_back(&r);
  std::sort(order.begin(), order.end(), [](const LossRecord* a, const LossRecord* b) {
    if (a->loss != b->loss) return a->loss > b->loss;
    return a->sample_id < b->sample_id;
  });
  // The epsilon absorbs product rounding (0.10 * 1000 lands a hair above
  // 100); a mathematically integral ratio must not select one extra.
  const double raw = beta * static_cast<double>(records.size());
  size_t k = static_cast<size_t>(std::ceil(raw - 1e-9));
  k = std::max<size_t>(1, std::min(k, records.size()));
  std::vector<std::string> ids;
  ids.reserve(k);
  for (size_t i = 0; i < k; ++i) ids.push_back(order[i]->sample_id);
  return ids;
}

double ValidationF1(TrainerProtocol* trainer, const std::string& model,
                    const std::vector<Sample>& d_val) {
  if (d_val.empty()) throw std::invalid_argument("empty validation set");
  const auto preds = trainer->BatchPredict(model, d_val);
  if (preds.size() != d_val.size())
    throw std::runtime_error("trainer returned " + std::to_string(preds.size()) +
                             " predictions for " + std::to_string(d_val.size()) +
                             " samples");
  Counts total;
  for (size_t i = 0; i < d_val.size(); ++i)
    total += MatchItems(d_val[i], preds[i]);
  return 100.0 * MicroF1(total).f1;
}

LdaState LdaLoop(TrainerProtocol* trainer, const std::vector<Sample>& d_train,
                 const std::vector<Sample>& d_aug,
                 const std::vector<Sample>& d_val, const LdaConfig& cfg) {
  if (!(cfg.beta0 > 0.0) || cfg.beta0 > 1.0)
    throw std::invalid_argument("initial selection ratio must be in (0, 1]");
  if (cfg.delta < 0.0)
    throw std::invalid_argument("convergence threshold must be non-negative");
  if (cfg.max_iters < 1) throw std::invalid_argument("need at least one iteration");
  if (cfg.fixed_iters && *cfg.fixed_iters < 1)
    throw std::invalid_argument("fixed iteration count must be positive");
  if (d_train.empty()) throw std::invalid_argument("empty training set");
  if (d_aug.empty()) throw std::invalid_argument("empty augmented pool");
  if (d_val.empty()) throw std::invalid_argument("empty validation set");

  const std::set<std::string> val_ids = IdSet(d_val);
  RequireDisjoint(val_ids, d_train, "the training set");
  RequireDisjoint(val_ids, d_aug, "the augmented pool");

  std::unordered_map<std::string, const Sample*> aug_by_id;
  for (const auto& s : d_aug) {
    if (!aug_by_id.emplace(s.id, &s).second)
      throw std::invalid_argument("duplicate augmented sample \"" + s.id + "\"");
  }

  LdaState state;
  bool resumed = false;
  if (!cfg.state_dir.empty() && fs::exists(StatePath(cfg))) {
    state = LdaStateFromJson(ReadFile(StatePath(cfg)));
    resumed = true;
  }
  if (!resumed) {
    state.model_handle = trainer->Train(d_train);
    state.history = {{0, ValidationF1(trainer, state.model_handle, d_val), 0}};
    state.t = 0;
    state.beta_t = cfg.beta0;
    state.cumulative_selected_fraction = 0.0;
    Checkpoint(cfg, state);
  }

  while (true) {
    if (cfg.fixed_iters) {
      if (state.t >= *cfg.fixed_iters) break;
    } else if (state.t >= 1) {
      const double gain = state.history[static_cast<size_t>(state.t)].val_f1 -
                          state.history[static_cast<size_t>(state.t) - 1].val_f1;
      if (gain < cfg.delta) break;
    }
    if (state.t >= cfg.max_iters) break;

    const auto losses = ComputeLosses(trainer, state.model_handle, d_aug);
    const auto selected = SelectTopBeta(losses, state.beta_t);
    std::vector<Sample> retrain;
    retrain.reserve(selected.size());
    for (const auto& id : selected) retrain.push_back(*aug_by_id.at(id));
    RequireDisjoint(val_ids, retrain, "the retraining subset");

    state.model_handle = trainer->Finetune(state.model_handle, retrain);
    const double f1 = ValidationF1(trainer, state.model_handle, d_val);
    state.cumulative_selected_fraction += state.beta_t;
    state.beta_t /= 2.0;
    state.t += 1;
    state.history.push_back({state.t, f1, retrain.size()});
    Checkpoint(cfg, state);
  }
  return state;
}

std::string LdaStateToJson(const LdaState& state) {
  nlohmann::ordered_json j;
  j["t"] = state.t;
  j["beta_t"] = state.beta_t;
  j["model_handle"] = state.model_handle;
  j["cumulative_selected_fraction"] = state.cumulative_selected_fraction;
  j["history"] = nlohmann::ordered_json::array();
  for (const auto& h : state.history) {
    j["history"].push_back({{"t", h.t},
                            {"val_f1", h.val_f1},
                            {"retrain_size", h.retrain_size}});
  }
  return j.dump(2) + "\n";
}

LdaState LdaStateFromJson(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  LdaState state;
  state.t = j.at("t").get<int>();
  state.beta_t = j.at("beta_t").get<double>();
  state.model_handle = j.at("model_handle").get<std::string>();
  state.cumulative_selected_fraction =
      j.at("cumulative_selected_fraction").get<double>();
  for (const auto& h : j.at("history")) {
    state.history.push_back({h.at("t").get<int>(), h.at("val_f1").get<double>(),
                             h.at("retrain_size").get<size_t>()});
  }
  if (state.history.empty() ||
      state.history.size() != static_cast<size_t>(state.t) + 1)
    throw std::invalid_argument("checkpoint history does not cover iteration count");
  for (const auto& h : state.history) {
    if (h.val_f1 < 0.0 || h.val_f1 > 100.0)
      throw std::invalid_argument("checkpoint F1 out of range");
  }
  return state;
}

}  // namespace ieforge

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

#ifndef IEFORGE_SRC_LDA_LDA_H_
#define IEFORGE_SRC_LDA_LDA_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "corpus/types.h"
#include "extract/extraction.h"

namespace ieforge {

// One sample's training loss under a fixed model.
struct LossRecord {
  std::string sample_id;
  double loss = 0.0;

  bool operator==(const LossRecord&) const = default;
};

// A trainer the selection loop can drive. Handles are opaque strings owned
// by the trainer; loss and predict must be deterministic for a fixed handle.
class TrainerProtocol {
 public:
  virtual ~TrainerProtocol() = default;

  // Trains from scratch and returns a handle to the new model.
  virtual std::string Train(const std::vector<Sample>& data) = 0;

  // Continues training from an existing model on new data; returns a handle
  // to the updated model. The parent handle stays valid.
  virtual std::string Finetune(const std::string& model,
                               const std::vector<Sample>& data) = 0;

  virtual double Loss(const std::string& model, const Sample& sample) = 0;
  virtual PredictionSet Predict(const std::string& model,
                                const Sample& sample) = 0;

  // Batch forms so process-backed trainers can amortize one invocation over
  // many samples. Results align with the input order. Defaults loop.
  virtual std::vector<LossRecord> BatchLoss(const std::string& model,
                                            const std::vector<Sample>& samples);
  virtual std::vector<PredictionSet> BatchPredict(
      const std::string& model, const std::vector<Sample>& samples);
};

struct LdaConfig {
  double beta0 = 0.10;  // initial selection ratio, halves each iteration
  double delta = 0.3;   // minimum validation F1 gain (points) to continue
  int max_iters = 8;    // hard bound; the gain rule alone could oscillate

  // When set, runs exactly this many iterations and ignores the gain rule.
  std::optional<int> fixed_iters;

  // When set, a state.json checkpoint is written here after the initial
  // training and after every iteration, and an existing checkpoint is
  // resumed instead of retraining from scratch.
  std::string state_dir;
};

struct LdaIteration {
  int t = 0;             // 0 is the initial model, before any selection
  double val_f1 = 0.0;   // percent
  size_t retrain_size = 0;

  bool operator==(const LdaIteration&) const = default;
};

struct LdaState {
  int t = 0;                  // completed selection iterations
  double beta_t = 0.0;        // ratio the next iteration would use
  std::string model_handle;   // latest model
  std::vector<LdaIteration> history;
  double cumulative_selected_fraction = 0.0;  // sum of the ratios spent

  bool operator==(const LdaState&) const = default;
};

// One loss record per sample, in sample order, via the trainer's batch call.
// Rejects non-finite or negative losses.
std::vector<LossRecord> ComputeLosses(TrainerProtocol* trainer,
                                      const std::string& model,
                                      const std::vector<Sample>& samples);

// Ids of the ceil(beta * n) largest-loss records, ordered by descending loss
// with ties broken by ascending id. Throws on an empty list or a ratio
// outside (0, 1].
std::vector<std::string> SelectTopBeta(const std::vector<LossRecord>& records,
                                       double beta);

// Pooled span-match Micro F1 of the model over a validation set, in percent.
double ValidationF1(TrainerProtocol* trainer, const std::string& model,
                    const std::vector<Sample>& d_val);

// Loss-guided selection and retraining. Trains an initial model on d_train,
// then repeatedly scores d_aug, selects the top beta fraction by loss,
// fine-tunes on that subset only, and halves beta; stops once the validation
// F1 gain falls below delta (or after fixed_iters / max_iters iterations).
// d_val must share no sample ids with d_train or d_aug.
LdaState LdaLoop(TrainerProtocol* trainer, const std::vector<Sample>& d_train,
                 const std::vector<Sample>& d_aug,
                 const std::vector<Sample>& d_val, const LdaConfig& cfg);

// Checkpoint (de)serialization for resumable runs.
std::string LdaStateToJson(const LdaState& state);
LdaState LdaStateFromJson(const std::string& text);

}  // namespace ieforge

#endif  // IEFORGE_SRC_LDA_LDA_H_

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

#ifndef IEFORGE_SRC_LDA_EXTERNAL_TRAINER_H_
#define IEFORGE_SRC_LDA_EXTERNAL_TRAINER_H_

#include <string>
#include <vector>

#include "lda/lda.h"

namespace ieforge {

struct ExternalTrainerConfig {
  std::string command;   // executable honoring the run-directory protocol
  std::string work_dir;  // run directories are created here
  double timeout_s = 600.0;
};

// Drives an out-of-process trainer through a file protocol. Each model
// handle is a fresh run directory under work_dir:
//
//   <command> train    <dir>   reads train.jsonl, writes model.ref
//   <command> finetune <dir>   reads parent.ref + retrain.jsonl, writes model.ref
//   <command> loss     <dir>   reads model.ref + samples.jsonl, writes
//                              losses.tsv (sample_id TAB loss per line)
//   <command> predict  <dir>   reads model.ref + samples.jsonl, writes
//                              predictions.jsonl (the extraction exchange format)
//
// parent.ref carries the parent run's model.ref content. Exit code 0 means
// success; anything else, a timeout, or a missing/malformed output file is a
// hard error that names the command and captures its stderr. Invocations are
// strictly sequential.
class ExternalTrainer : public TrainerProtocol {
 public:
  explicit ExternalTrainer(ExternalTrainerConfig config);

  std::string Train(const std::vector<Sample>& data) override;
  std::string Finetune(const std::string& model,
                       const std::vector<Sample>& data) override;
  double Loss(const std::string& model, const Sample& sample) override;
  PredictionSet Predict(const std::string& model, const Sample& sample) override;
  std::vector<LossRecord> BatchLoss(const std::string& model,
                                    const std::vector<Sample>& samples) override;
  std::vector<PredictionSet> BatchPredict(
      const std::string& model, const std::vector<Sample>& samples) override;

 private:
  std::string NewRunDir();
  void Run(const std::string& verb, const std::string& run_dir);
  std::string ReadModelRef(const std::string& run_dir) const;

  ExternalTrainerConfig config_;
  int next_run_ = 0;
};

}  // namespace ieforge

#endif  // IEFORGE_SRC_LDA_EXTERNAL_TRAINER_H_

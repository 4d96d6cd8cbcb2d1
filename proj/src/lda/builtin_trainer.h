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

#ifndef IEFORGE_SRC_LDA_BUILTIN_TRAINER_H_
#define IEFORGE_SRC_LDA_BUILTIN_TRAINER_H_

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "corpus/types.h"
#include "lda/lda.h"

namespace ieforge {

// Byte range of one token in a text.
struct TextToken {
  size_t start = 0;
  size_t end = 0;

  bool operator==(const TextToken&) const = default;
};

// Splits into alphanumeric runs (non-ASCII bytes count as word characters so
// UTF-8 sequences stay whole) plus single punctuation tokens.
std::vector<TextToken> TokenizeSpans(const std::string& text);

// Turns per-token B-/I-/O tags back into typed spans. A B- tag opens a span;
// an I- tag extends a span of the same type and otherwise opens one. Span
// offsets cover the first through last token.
std::vector<EntityAnn> DecodeBio(const std::string& text,
                                 const std::vector<TextToken>& tokens,
                                 const std::vector<std::string>& tags);

struct BuiltinHyper {
  int epochs = 12;
  int finetune_epochs = 4;
  double lr = 0.2;
  double finetune_lr = 0.05;
  size_t feature_buckets = size_t{1} << 17;
  size_t workers = 4;
  uint64_t seed = 1;
};

// Desk-scale stand-in trainer: a multinomial logistic model over hashed
// lexical features. Sequence tasks tag tokens B-/I-/O and decode spans; the
// relation task classifies each gold argument pair. Loss is the token-mean
// (or pair-mean) cross entropy, so sentence length does not inflate it.
// Everything is seeded and deterministic; models live in memory for the
// lifetime of the trainer.
class BuiltinTrainer : public TrainerProtocol {
 public:
  explicit BuiltinTrainer(Schema schema, BuiltinHyper hyper = {});

  std::string Train(const std::vector<Sample>& data) override;
  std::string Finetune(const std::string& model,
                       const std::vector<Sample>& data) override;
  double Loss(const std::string& model, const Sample& sample) override;
  PredictionSet Predict(const std::string& model, const Sample& sample) override;
  std::vector<LossRecord> BatchLoss(const std::string& model,
                                    const std::vector<Sample>& samples) override;

  // Mean training loss per epoch of the most recent Train/Finetune call.
  const std::vector<double>& LastTrainCurve() const { return last_curve_; }

 private:
  struct Model {
    std::vector<float> w;  // labels x buckets
  };

  const Model& Find(const std::string& handle) const;
  void Validate(const std::vector<Sample>& data) const;
  std::string Store(Model model);
  void Sgd(Model* model, const std::vector<Sample>& data, int epochs, double lr,
           uint64_t seed);

  // Per-label scores for one feature bundle.
  std::vector<double> Probs(const Model& model,
                            const std::vector<uint32_t>& features) const;

  std::vector<std::vector<uint32_t>> SampleFeatures(const Sample& s) const;
  std::vector<size_t> GoldLabels(const Sample& s) const;

  Schema schema_;
  BuiltinHyper hyper_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, size_t> label_index_;
  std::unordered_map<std::string, Model> models_;
  std::vector<double> last_curve_;
  int next_id_ = 0;
};

}  // namespace ieforge

#endif  // IEFORGE_SRC_LDA_BUILTIN_TRAINER_H_

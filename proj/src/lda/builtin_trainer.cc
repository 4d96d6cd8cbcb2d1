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

#include "lda/builtin_trainer.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "corpus/corpus.h"
#include "util/parallel.h"
#include "util/rng.h"
#include "util/text.h"

namespace ieforge {
namespace {

bool WordByte(unsigned char c) {
  return std::isalnum(c) != 0 || c >= 0x80;
}

uint64_t Fnv1a(std::string_view s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string Shape(std::string_view word) {
  std::string shape;
  char last = 0;
  for (unsigned char c : word) {
    char k = std::isupper(c) ? 'X' : std::isdigit(c) ? '9' : std::islower(c) ? 'x' : 'o';
    if (k != last) shape += k;
    last = k;
  }
  return shape;
}

}  // namespace

std::vector<TextToken> TokenizeSpans(const std::string& text) {
  std::vector<TextToken> tokens;
  size_t i = 0;
  while (i < text.size()) {
    const unsigned char c = static_cast<unsigned char>(text[i]);
    if (std::isspace(c)) {
      ++i;
      continue;
    }
    if (WordByte(c)) {
      size_t j = i + 1;
      while (j < text.size() && WordByte(static_cast<unsigned char>(text[j]))) ++j;
      tokens.push_back({i, j});
      i = j;
    } else {
      tokens.push_back({i, i + 1});
      ++i;
    }
  }
  return tokens;
}

std::vector<EntityAnn> DecodeBio(const std::string& text,
                                 const std::vector<TextToken>& tokens,
                                 const std::vector<std::string>& tags) {
  if (tokens.size() != tags.size())
    throw std::invalid_argument("one tag per token required");
  std::vector<EntityAnn> spans;
  size_t i = 0;
  while (i < tags.size()) {
    const std::string& tag = tags[i];
    if (tag.size() < 3 || (tag[0] != 'B' && tag[0] != 'I') || tag[1] != '-') {
      ++i;
      continue;
    }
    const std::string type = tag.substr(2);
    size_t j = i + 1;
    while (j < tags.size() && tags[j] == "I-" + type) ++j;
    const size_t start = tokens[i].start;
    const size_t end = tokens[j - 1].end;
    spans.push_back({type, text.substr(start, end - start), start, end});
    i = j;
  }
  return spans;
}

BuiltinTrainer::BuiltinTrainer(Schema schema, BuiltinHyper hyper)
    : schema_(std::move(schema)), hyper_(hyper) {
  if (schema_.types.empty()) throw std::invalid_argument("schema has no labels");
  if (schema_.task == Task::kRe) {
    for (const auto& t : schema_.types) labels_.push_back(t.label);
  } else {
    labels_.push_back("O");
    for (const auto& t : schema_.types) {
      labels_.push_back("B-" + t.label);
      labels_.push_back("I-" + t.label);
    }
  }
  for (size_t i = 0; i < labels_.size(); ++i) label_index_[labels_[i]] = i;
}

const BuiltinTrainer::Model& BuiltinTrainer::Find(const std::string& handle) const {
  auto it = models_.find(handle);
  if (it == models_.end())
    throw std::invalid_argument("unknown model handle \"" + handle + "\"");
  return it->second;
}

void BuiltinTrainer::Validate(const std::vector<Sample>& data) const {
  if (data.empty()) throw std::invalid_argument("empty training data");
  for (const auto& s : data) {
    if (s.task != schema_.task)
      throw std::invalid_argument("sample \"" + s.id + "\" is not a " +
                                  std::string(TaskToString(schema_.task)) +
                                  " sample");
  }
  CheckLabels(data, schema_);
}

std::string BuiltinTrainer::Store(Model model) {
  std::string handle = "m" + std::to_string(next_id_++);
  models_.emplace(handle, std::move(model));
  return handle;
}

std::vector<std::vector<uint32_t>> BuiltinTrainer::SampleFeatures(
    const Sample& s) const {
  const uint64_t buckets = hyper_.feature_buckets;
  auto hash = [buckets](const std::string& f) {
    return static_cast<uint32_t>(Fnv1a(f) % buckets);
  };
  std::vector<std::vector<uint32_t>> features;

  if (schema_.task == Task::kRe) {
    features.reserve(s.triples.size());
    for (const auto& t : s.triples) {
      std::vector<uint32_t> f;
      const std::string h = AsciiLower(Trim(t.head)), l = AsciiLower(Trim(t.tail));
      f.push_back(hash("b"));
      f.push_back(hash("h=" + h));
      f.push_back(hash("t=" + l));
      f.push_back(hash("ht=" + h + "|" + l));
      const size_t hp = s.text.find(t.head), tp = s.text.find(t.tail);
      if (hp != std::string::npos && tp != std::string::npos) {
        f.push_back(hash(hp <= tp ? "ord=ht" : "ord=th"));
        const size_t lo = std::min(hp + t.head.size(), tp + t.tail.size());
        const size_t hi = std::max(hp, tp);
        if (lo < hi) {
          for (const auto& tok : TokenizeSpans(s.text.substr(lo, hi - lo)))
            f.push_back(hash("bw=" + AsciiLower(s.text.substr(lo + tok.start,
                                                              tok.end - tok.start))));
        }
      }
      features.push_back(std::move(f));
    }
    return features;
  }

  const auto tokens = TokenizeSpans(s.text);
  features.reserve(tokens.size());
  for (size_t i = 0; i < tokens.size(); ++i) {
    const std::string word = s.text.substr(tokens[i].start,
                                           tokens[i].end - tokens[i].start);
    const std::string lower = AsciiLower(word);
    std::vector<uint32_t> f;
    f.push_back(hash("b"));
    f.push_back(hash("w=" + lower));
    f.push_back(hash("W=" + word));
    f.push_back(hash("shape=" + Shape(word)));
    for (size_t n = 1; n <= 3 && n <= lower.size(); ++n) {
      f.push_back(hash("p" + std::to_string(n) + "=" + lower.substr(0, n)));
      f.push_back(hash("s" + std::to_string(n) + "=" + lower.substr(lower.size() - n)));
    }
    if (i > 0) {
      f.push_back(hash("prev=" + AsciiLower(s.text.substr(
                                     tokens[i - 1].start,
                                     tokens[i - 1].end - tokens[i - 1].start))));
    } else {
      f.push_back(hash("prev=<s>"));
    }
    if (i + 1 < tokens.size()) {
      f.push_back(hash("next=" + AsciiLower(s.text.substr(
                                     tokens[i + 1].start,
                                     tokens[i + 1].end - tokens[i + 1].start))));
    } else {
      f.push_back(hash("next=</s>"));
    }
    features.push_back(std::move(f));
  }
  return features;
}

std::vector<size_t> BuiltinTrainer::GoldLabels(const Sample& s) const {
  if (schema_.task == Task::kRe) {
    std::vector<size_t> gold;
    gold.reserve(s.triples.size());
    for (const auto& t : s.triples) gold.push_back(label_index_.at(t.relation));
    return gold;
  }

  const auto tokens = TokenizeSpans(s.text);
  std::vector<size_t> gold(tokens.size(), 0);  // O
  std::vector<bool> taken(tokens.size(), false);
  auto mark = [&](const std::string& type, size_t start, size_t end) {
    bool first = true;
    for (size_t i = 0; i < tokens.size(); ++i) {
      if (tokens[i].end <= start || tokens[i].start >= end) continue;
      if (taken[i]) continue;
      taken[i] = true;
      gold[i] = label_index_.at((first ? "B-" : "I-") + type);
      first = false;
    }
  };
  if (schema_.task == Task::kNer) {
    for (const auto& e : s.entities) mark(e.type, e.start, e.end);
  } else {
    for (const auto& e : s.events) mark(e.event_type, e.trigger_start, e.trigger_end);
  }
  return gold;
}

std::vector<double> BuiltinTrainer::Probs(
    const Model& model, const std::vector<uint32_t>& features) const {
  const size_t L = labels_.size();
  const size_t B = hyper_.feature_buckets;
  std::vector<double> logits(L, 0.0);
  for (size_t l = 0; l < L; ++l) {
    double z = 0.0;
    const float* row = model.w.data() + l * B;
    for (uint32_t h : features) z += row[h];
    logits[l] = z;
  }
  const double peak = *std::max_element(logits.begin(), logits.end());
  double norm = 0.0;
  for (double& z : logits) {
    z = std::exp(z - peak);
    norm += z;
  }
  for (double& z : logits) z /= norm;
  return logits;
}

void BuiltinTrainer::Sgd(Model* model, const std::vector<Sample>& data,
                         int epochs, double lr, uint64_t seed) {
  const size_t B = hyper_.feature_buckets;
  std::vector<std::vector<std::vector<uint32_t>>> features(data.size());
  std::vector<std::vector<size_t>> gold(data.size());
  for (size_t i = 0; i < data.size(); ++i) {
    features[i] = SampleFeatures(data[i]);
    gold[i] = GoldLabels(data[i]);
  }

  Rng rng(seed);
  std::vector<size_t> order(data.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;

  last_curve_.clear();
  for (int epoch = 0; epoch < epochs; ++epoch) {
    const double step = lr / (1.0 + 0.5 * epoch);
    rng.Shuffle(&order);
    double loss_sum = 0.0;
    size_t items = 0;
    for (size_t idx : order) {
      const auto& fs = features[idx];
      const auto& gs = gold[idx];
      for (size_t k = 0; k < fs.size(); ++k) {
        const auto probs = Probs(*model, fs[k]);
        loss_sum += -std::log(std::max(probs[gs[k]], 1e-300));
        ++items;
        for (size_t l = 0; l < labels_.size(); ++l) {
          const double grad = probs[l] - (l == gs[k] ? 1.0 : 0.0);
          if (grad == 0.0) continue;
          float* row = model->w.data() + l * B;
          const float delta = static_cast<float>(-step * grad);
          for (uint32_t h : fs[k]) row[h] += delta;
        }
      }
    }
    last_curve_.push_back(items > 0 ? loss_sum / static_cast<double>(items) : 0.0);
  }
}

std::string BuiltinTrainer::Train(const std::vector<Sample>& data) {
  Validate(data);
  Model model;
  model.w.assign(labels_.size() * hyper_.feature_buckets, 0.0f);
  Sgd(&model, data, hyper_.epochs, hyper_.lr,
      DeriveSeed(hyper_.seed, {"train", std::to_string(next_id_)}));
  return Store(std::move(model));
}

std::string BuiltinTrainer::Finetune(const std::string& parent,
                                     const std::vector<Sample>& data) {
  Validate(data);
  Model model = Find(parent);  // copy, the parent handle stays usable
  Sgd(&model, data, hyper_.finetune_epochs, hyper_.finetune_lr,
      DeriveSeed(hyper_.seed, {"finetune", std::to_string(next_id_)}));
  return Store(std::move(model));
}

double BuiltinTrainer::Loss(const std::string& handle, const Sample& sample) {
  const Model& model = Find(handle);
  if (sample.task != schema_.task)
    throw std::invalid_argument("sample \"" + sample.id + "\" is not a " +
                                std::string(TaskToString(schema_.task)) + " sample");
  const auto features = SampleFeatures(sample);
  const auto gold = GoldLabels(sample);
  if (features.empty()) return 0.0;
  double sum = 0.0;
  for (size_t k = 0; k < features.size(); ++k) {
    const auto probs = Probs(model, features[k]);
    sum += -std::log(std::max(probs[gold[k]], 1e-300));
  }
  return sum / static_cast<double>(features.size());
}

PredictionSet BuiltinTrainer::Predict(const std::string& handle,
                                      const Sample& sample) {
  const Model& model = Find(handle);
  PredictionSet out;
  out.sample_id = sample.id;
  out.parse_ok = true;

  if (schema_.task == Task::kRe) {
    for (const auto& t : sample.triples) {
      Sample one = sample;
      one.triples = {t};
      const auto probs = Probs(model, SampleFeatures(one)[0]);
      const size_t best =
          std::max_element(probs.begin(), probs.end()) - probs.begin();
      out.triples.push_back({labels_[best], t.head, t.tail});
    }
    return out;
  }

  const auto tokens = TokenizeSpans(sample.text);
  const auto features = SampleFeatures(sample);
  std::vector<std::string> tags;
  tags.reserve(tokens.size());
  for (const auto& f : features) {
    const auto probs = Probs(model, f);
    const size_t best =
        std::max_element(probs.begin(), probs.end()) - probs.begin();
    tags.push_back(labels_[best]);
  }
  for (auto& span : DecodeBio(sample.text, tokens, tags)) {
    if (schema_.task == Task::kNer) {
      out.entities.push_back(
          {span.type, span.name, span.start, span.end});
    } else {
      out.events.push_back({span.type, span.name, span.start, span.end});
    }
  }
  return out;
}

std::vector<LossRecord> BuiltinTrainer::BatchLoss(
    const std::string& handle, const std::vector<Sample>& samples) {
  Find(handle);  // fail fast before spawning workers
  std::vector<LossRecord> records(samples.size());
  ParallelFor(samples.size(), hyper_.workers, [&](size_t i) {
    records[i] = {samples[i].id, Loss(handle, samples[i])};
  });
  return records;
}

}  // namespace ieforge

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

#include "corpus/sampling.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "util/rng.h"

namespace ieforge {

std::map<std::string, int> LabelSignature(const Sample& sample) {
  std::map<std::string, int> sig;
  switch (sample.task) {
    case Task::kNer:
      for (const EntityAnn& e : sample.entities) ++sig[e.type];
      break;
    case Task::kRe:
      for (const TripleAnn& t : sample.triples) ++sig[t.relation];
      break;
    case Task::kEd:
      for (const EventAnn& e : sample.events) ++sig[e.event_type];
      break;
  }
  if (sig.empty()) sig["NULL"] = 1;
  return sig;
}

std::string SignatureKey(const std::map<std::string, int>& signature) {
  std::string key;
  for (const auto& [label, count] : signature) {
    if (!key.empty()) key += '|';
    key += label;
    key += ':';
    key += std::to_string(count);
  }
  return key;
}

namespace {

struct Group {
  std::string key;
  std::set<std::string> labels;
  std::vector<size_t> indices;  // into the corpus, ordered by sample id
  size_t quota = 0;
};

double BoundPenalty(const std::map<std::string, double>& selected,
                    const std::map<std::string, double>& target) {
  double phi = 0.0;
  for (const auto& [label, need] : target) {
    const double dev = std::abs(selected.at(label) - need);
    const double excess = dev - 1.0 - 1e-9;
    if (excess > 0.0) phi += excess * excess;
  }
  return phi;
}

// Moves single allocation units between signature bins while some label's
// selected count is more than one away from its proportional share. Each
// accepted move strictly shrinks the total out-of-bound mass, so this
// terminates.
void RebalanceQuotas(std::vector<Group>* groups,
                     const std::map<std::string, double>& target,
                     std::map<std::string, double>* selected) {
  for (int round = 0; round < 10000; ++round) {
    const double phi = BoundPenalty(*selected, target);
    if (phi == 0.0) return;
    double best_phi = phi;
    size_t best_from = 0;
    size_t best_to = 0;
    bool found = false;
    for (size_t from = 0; from < groups->size(); ++from) {
      if ((*groups)[from].quota == 0) continue;
      for (size_t to = 0; to < groups->size(); ++to) {
        if (to == from) continue;
        Group& dst = (*groups)[to];
        if (dst.quota >= dst.indices.size()) continue;
        std::map<std::string, double> trial = *selected;
        for (const std::string& l : (*groups)[from].labels) trial[l] -= 1.0;
        for (const std::string& l : dst.labels) trial[l] += 1.0;
        const double trial_phi = BoundPenalty(trial, target);
        if (trial_phi < best_phi - 1e-12) {
          best_phi = trial_phi;
          best_from = from;
          best_to = to;
          found = true;
        }
      }
    }
    if (!found) return;
    --(*groups)[best_from].quota;
    ++(*groups)[best_to].quota;
    for (const std::string& l : (*groups)[best_from].labels) (*selected)[l] -= 1.0;
    for (const std::string& l : (*groups)[best_to].labels) (*selected)[l] += 1.0;
  }
}

}  // namespace

std::vector<Sample> StratifiedSample(const std::vector<Sample>& corpus,
                                     size_t k, uint64_t seed) {
  if (corpus.empty()) throw std::invalid_argument("cannot sample an empty corpus");
  if (k == 0 || k > corpus.size()) {
    throw std::invalid_argument("sample size " + std::to_string(k) +
                                " out of range for corpus of " +
                                std::to_string(corpus.size()));
  }
  const size_t n = corpus.size();

  std::map<std::string, Group> by_key;
  for (size_t i = 0; i < n; ++i) {
    const auto sig = LabelSignature(corpus[i]);
    const std::string key = SignatureKey(sig);
    Group& g = by_key[key];
    if (g.indices.empty()) {
      g.key = key;
      for (const auto& [label, count] : sig) g.labels.insert(label);
    }
    g.indices.push_back(i);
  }
  std::vector<Group> groups;
  groups.reserve(by_key.size());
  for (auto& [key, g] : by_key) {
    std::sort(g.indices.begin(), g.indices.end(), [&](size_t a, size_t b) {
      return corpus[a].id < corpus[b].id;
    });
    groups.push_back(std::move(g));
  }

  // Largest-remainder quotas over signature bins. Exact shares are k*n_g/n;
  // remainders are compared as integers (k*n_g mod n) to dodge FP ties.
  size_t assigned = 0;
  std::vector<std::pair<uint64_t, size_t>> remainders;  // (mod, group index)
  for (size_t gi = 0; gi < groups.size(); ++gi) {
    const uint64_t numer = static_cast<uint64_t>(k) * groups[gi].indices.size();
    groups[gi].quota = numer / n;
    assigned += groups[gi].quota;
    const uint64_t mod = numer % n;
    if (mod > 0) remainders.emplace_back(mod, gi);
  }
  std::sort(remainders.begin(), remainders.end(),
            [&](const auto& a, const auto& b) {
              if (a.first != b.first) return a.first > b.first;
              return groups[a.second].key < groups[b.second].key;
            });
  for (size_t r = 0; assigned < k; ++r, ++assigned) {
    ++groups[remainders[r].second].quota;
  }

  std::map<std::string, double> target;    // label -> k * presence / n
  std::map<std::string, double> selected;  // label -> quota-weighted presence
  for (const Group& g : groups) {
    for (const std::string& l : g.labels) {
      target[l] += static_cast<double>(k) * g.indices.size() / static_cast<double>(n);
      selected[l] += static_cast<double>(g.quota);
    }
  }
  RebalanceQuotas(&groups, target, &selected);

  std::vector<Sample> picked;
  picked.reserve(k);
  for (const Group& g : groups) {
    std::vector<size_t> order = g.indices;
    Rng rng(DeriveSeed(seed, {"strata", g.key}));
    rng.Shuffle(&order);
    for (size_t j = 0; j < g.quota; ++j) {
      picked.push_back(corpus[order[j]]);
    }
  }
  std::stable_sort(picked.begin(), picked.end(),
                   [](const Sample& a, const Sample& b) { return a.id < b.id; });
  return picked;
}

}  // namespace ieforge

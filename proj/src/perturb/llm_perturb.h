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

#ifndef IEFORGE_SRC_PERTURB_LLM_PERTURB_H_
#define IEFORGE_SRC_PERTURB_LLM_PERTURB_H_

#include <cstdint>
#include <string>

#include "corpus/types.h"
#include "llm/gateway.h"
#include "perturb/perturb.h"
#include "perturb/validate.h"

namespace ieforge {

struct LlmPerturbOptions {
  int max_attempts = 3;
  double temperature = 0.7;  // diversity is the point of generation
  ValidationContext validation;
};

// Produces one model-generated adversarial variant for a mention-replacing,
// sentence-extending, or context-changing kind. Every candidate must pass
// the adversarial validator; failures are regenerated with a fresh request
// seed up to max_attempts, then the sample is Rejected with the collected
// reasons. Mask positions for context changes are fixed per (seed, sample,
// kind) so retries re-predict the same masks. Rule-based kinds are refused;
// use TypoInject and LowercaseConvert directly.
PerturbOutcome LlmPerturb(Perturbation kind, const Sample& sample,
                          LlmGateway& gateway, uint64_t seed,
                          const LlmPerturbOptions& options = {});

// Prompt builders, exposed for inspection and tests.
std::string ReplacePrompt(const Sample& sample);
std::string ExtendPrompt(const Sample& sample);
std::string ContextPrompt(const std::string& masked_text, Task task);

}  // namespace ieforge

#endif  // IEFORGE_SRC_PERTURB_LLM_PERTURB_H_

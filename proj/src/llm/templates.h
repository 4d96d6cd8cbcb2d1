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

#ifndef IEFORGE_SRC_LLM_TEMPLATES_H_
#define IEFORGE_SRC_LLM_TEMPLATES_H_

#include <map>
#include <string>
#include <vector>

namespace ieforge {

// Built-in prompt templates, keyed by name:
//   ner_extract / re_extract / ed_extract   few-shot extraction prompts
//   replace_entities / replace_triples / replace_triggers
//   extend_sentence / change_context        adversarial generation prompts
// Placeholders look like {{name}}. Rendering substitutes every bound
// placeholder and fails on an unknown template name or a placeholder left
// unbound; literal braces elsewhere in a template pass through untouched.
std::string RenderTemplate(const std::string& name,
                           const std::map<std::string, std::string>& bindings);

const std::vector<std::string>& TemplateNames();

}  // namespace ieforge

#endif  // IEFORGE_SRC_LLM_TEMPLATES_H_

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

#include "llm/templates.h"

#include <stdexcept>

namespace ieforge {
namespace {

constexpr const char kNerExtract[] =
    R"(## Task Objective
Perform Named Entity Recognition (NER) on input sentences to extract entities of these types:

##Entity Types:
{{types_block}}

## Output Formatting
1. Return a JSON list of entities
2. Each entity must include:
- **Type**: Entity category (exact uppercase labels)
- **Name**: Original text span
3. Return empty list if no entities found
{{examples_section}}
## Current Task
Input: {{test_sentence}}
Output:
)";

constexpr const char kReExtract[] =
    R"(## Task Objective
Perform Relation Extraction (RE) on input sentences to extract relational triples of these types:

##Relation Types:
{{types_block}}

## Output Formatting
1. Return a JSON list of relational triples
2. Each relational triple must include:
- **Head**: Original head entity span
- **Type**: Relation category (exact uppercase labels)
- **Tail**: Original tail entity span
3. Return empty list if no relational triples found
{{examples_section}}
## Current Task
Input: {{test_sentence}}
Output:
)";

constexpr const char kEdExtract[] =
    R"(## Task Objective
Perform Event Detection (ED) on input sentences to extract events of these types:

##Event Types:
{{types_block}}

## Output Formatting
1. Return a JSON list of events
2. Each event must include:
- **Type**: Event category (exact uppercase labels)
- **Trigger**: Event trigger span
3. Return empty list if no event found
{{examples_section}}
## Current Task
Input: {{test_sentence}}
Output:
)";

constexpr const char kReplaceEntities[] =
    R"(## Task Objective
Rewrite the input sentence, replacing each listed entity mention with a different real-world entity of the same type. Keep every other word unchanged and reuse the same replacement wherever a mention repeats.

## Mentions to Replace
{{mentions_block}}

## Output Formatting
Return one JSON object with:
- **text**: the rewritten sentence
- **entities**: a JSON list, one item per mention above in the same order, each with **Type** (unchanged) and **Name** (the new mention exactly as written in the rewritten sentence)

## Current Task
Input: {{test_sentence}}
Output:
)";

constexpr const char kReplaceTriples[] =
    R"(## Task Objective
Rewrite the input sentence, replacing the head and tail mentions of each listed relational triple with different real-world entities so that every relation still holds under its original type. Keep every other word unchanged.

## Triples to Replace
{{mentions_block}}

## Output Formatting
Return one JSON object with:
- **text**: the rewritten sentence
- **triples**: a JSON list, one item per triple above in the same order, each with **Type** (unchanged), **Head**, and **Tail** (the new mentions exactly as written in the rewritten sentence)

## Current Task
Input: {{test_sentence}}
Output:
)";

constexpr const char kReplaceTriggers[] =
    R"(## Task Objective
Rewrite the input sentence, replacing each listed event trigger with a different trigger word that expresses the same event type. Keep every other word unchanged.

## Triggers to Replace
{{mentions_block}}

## Output Formatting
Return one JSON object with:
- **text**: the rewritten sentence
- **events**: a JSON list, one item per trigger above in the same order, each with **Type** (unchanged) and **Trigger** (the new trigger exactly as written in the rewritten sentence)

## Current Task
Input: {{test_sentence}}
Output:
)";

constexpr const char kExtendSentence[] =
    R"(## Task Objective
Extend the input sentence by appending additional context to its end. The original sentence must appear verbatim and unchanged at the start of your output. The extension must not introduce any new {{forbidden}}.

## Output Formatting
Return one JSON object with:
- **text**: the extended sentence, beginning with the original sentence verbatim

## Current Task
Input: {{test_sentence}}
Output:
)";

constexpr const char kChangeContext[] =
    R"(## Task Objective
The input sentence has one or more words replaced with [MASK]. For each [MASK], propose three different single-word replacements that fit the sentence naturally without adding new {{forbidden}}.

## Output Formatting
Return one JSON object with:
- **predictions**: a JSON list with one item per [MASK] in reading order; each item is a list of exactly three single words

## Current Task
Input: {{masked_sentence}}
Output:
)";

const std::map<std::string, const char*>& TemplateTable() {
  static const auto* table = new std::map<std::string, const char*>{
      {"ner_extract", kNerExtract},
      {"re_extract", kReExtract},
      {"ed_extract", kEdExtract},
      {"replace_entities", kReplaceEntities},
      {"replace_triples", kReplaceTriples},
      {"replace_triggers", kReplaceTriggers},
      {"extend_sentence", kExtendSentence},
      {"change_context", kChangeContext},
  };
  return *table;
}

}  // namespace

std::string RenderTemplate(const std::string& name,
                           const std::map<std::string, std::string>& bindings) {
  const auto& table = TemplateTable();
  const auto it = table.find(name);
  if (it == table.end()) {
    throw std::invalid_argument("unknown template: " + name);
  }
  const std::string_view tpl = it->second;

  std::string out;
  out.reserve(tpl.size());
  size_t pos = 0;
  while (pos < tpl.size()) {
    const size_t open = tpl.find("{{", pos);
    if (open == std::string_view::npos) {
      out.append(tpl.substr(pos));
      break;
    }
    const size_t close = tpl.find("}}", open + 2);
    if (close == std::string_view::npos) {
      out.append(tpl.substr(pos));
      break;
    }
    out.append(tpl.substr(pos, open - pos));
    const std::string key(tpl.substr(open + 2, close - open - 2));
    const auto bound = bindings.find(key);
    if (bound == bindings.end()) {
      throw std::invalid_argument("unbound placeholder '" + key +
                                  "' in template '" + name + "'");
    }
    out.append(bound->second);
    pos = close + 2;
  }
  return out;
}

const std::vector<std::string>& TemplateNames() {
  static const auto* names = [] {
    auto* v = new std::vector<std::string>;
    for (const auto& [name, text] : TemplateTable()) v->push_back(name);
    return v;
  }();
  return *names;
}

}  // namespace ieforge

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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "corpus/corpus.h"
#include "corpus/types.h"
#include "eval/evaluation.h"
#include "lda/builtin_trainer.h"
#include "lda/external_trainer.h"
#include "lda/lda.h"
#include "perturb/perturb.h"
#include "util/fsio.h"
#include "util/rng.h"

using namespace ieforge;

namespace fs = std::filesystem;

namespace {

std::string TempDir(const std::string& tag) {
  auto dir = fs::temp_directory_path() /
             ("ieforge_lda_" + tag + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir.string();
}

// Pool 1 feeds the clean training split; pool 2 names only ever appear in
// replacement children and the held-out splits.
const char* const kPer1[] = {"Alice", "Bob",   "Carol", "David",
                             "Emma",  "Frank", "Grace", "Henry"};
const char* const kLoc1[] = {"Rome", "Paris",  "Berlin", "Madrid",
                             "Oslo", "Vienna", "Lisbon", "Dublin"};
const char* const kPer2[] = {"Zoltan", "Quirin", "Xander", "Yusuf"};
const char* const kLoc2[] = {"Tallinn", "Nairobi", "Quito", "Harare"};

Schema ToyNerSchema() {
  Schema schema;
  schema.dataset = "toy";
  schema.task = Task::kNer;
  schema.types = {{"PER", "person name"}, {"LOC", "place name"}};
  return schema;
}

struct Piece {
  std::string text;
  std::string type;  // empty for filler
};

Sample Assemble(const std::string& id, const std::vector<Piece>& pieces) {
  Sample s;
  s.id = id;
  s.task = Task::kNer;
  s.dataset = "toy";
  for (const auto& p : pieces) {
    const size_t start = s.text.size();
    s.text += p.text;
    if (!p.type.empty()) s.entities.push_back({p.type, p.text, start, s.text.size()});
  }
  return s;
}

// The two templates share every context word, so position and surroundings
// carry no type signal; only the name itself can reveal PER versus LOC.
Sample PerFirst(const std::string& id, const std::string& per,
                const std::string& loc) {
  return Assemble(id, {{per, "PER"},
                       {" met ", ""},
                       {loc, "LOC"},
                       {" in the quiet evening.", ""}});
}

Sample LocFirst(const std::string& id, const std::string& loc,
                const std::string& per) {
  return Assemble(id, {{loc, "LOC"},
                       {" met ", ""},
                       {per, "PER"},
                       {" in the quiet evening.", ""}});
}

// Replacement child: same template as the parent, pool 2 names.
Sample NameSwap(const Sample& parent, const std::string& per,
                const std::string& loc) {
  const bool loc_first = parent.entities.at(0).type == "LOC";
  Sample child = loc_first ? LocFirst("x", loc, per) : PerFirst("x", per, loc);
  child.id = ChildId(parent, Perturbation::kP1);
  child.parent_id = parent.id;
  child.perturbation = Perturbation::kP1;
  return child;
}

std::vector<Sample> CleanTrain() {
  std::vector<Sample> out;
  for (int i = 0; i < 32; ++i) {
    char id[8];
    std::snprintf(id, sizeof(id), "c%02d", i);
    const std::string per = kPer1[i % 8];
    const std::string loc = kLoc1[(i / 2) % 8];
    out.push_back(i % 2 ? LocFirst(id, loc, per) : PerFirst(id, per, loc));
  }
  return out;
}

// Half replacement children with unseen names, half lowercase children.
std::vector<Sample> AugPool(const std::vector<Sample>& train) {
  std::vector<Sample> out;
  for (size_t i = 0; i < train.size(); ++i) {
    out.push_back(NameSwap(train[i], kPer2[(i * 3 + 1) % 4], kLoc2[(i * 5 + 2) % 4]));
  }
  for (const auto& parent : train) {
    PerturbOutcome low = LowercaseConvert(parent);
    REQUIRE(low.status == PerturbOutcome::Status::kPerturbed);
    out.push_back(*low.sample);
  }
  return out;
}

std::vector<Sample> HeldOut(const std::string& prefix, int name_shift) {
  std::vector<Sample> out;
  for (int i = 0; i < 8; ++i) {
    const std::string id = prefix + std::to_string(i);
    const std::string per = kPer2[(i + name_shift) % 4];
    const std::string loc = kLoc2[(i + name_shift + 1) % 4];
    out.push_back(i % 2 ? LocFirst(id, loc, per) : PerFirst(id, per, loc));
  }
  return out;
}

std::vector<std::string> Tags(const std::vector<std::string>& tags) { return tags; }

// Plays back scripted losses and validation quality so loop mechanics can be
// pinned without real learning. Handle "g<n>" encodes the model generation;
// generation g echoes the first quota[g] golds of a sample and pads the rest
// with junk, which makes precision equal recall.
class ScriptedTrainer : public TrainerProtocol {
 public:
  std::map<std::string, double> losses;
  std::vector<int> quota;
  std::vector<size_t> train_sizes;
  std::vector<std::vector<std::string>> finetune_ids;

  std::string Train(const std::vector<Sample>& data) override {
    train_sizes.push_back(data.size());
    return "g0";
  }

  std::string Finetune(const std::string& model,
                       const std::vector<Sample>& data) override {
    std::vector<std::string> ids;
    ids.reserve(data.size());
    for (const auto& s : data) ids.push_back(s.id);
    finetune_ids.push_back(std::move(ids));
    return "g" + std::to_string(Generation(model) + 1);
  }

  double Loss(const std::string&, const Sample& s) override {
    return losses.at(s.id);
  }

  PredictionSet Predict(const std::string& model, const Sample& s) override {
    PredictionSet out;
    out.sample_id = s.id;
    out.parse_ok = true;
    const size_t gen = static_cast<size_t>(Generation(model));
    const size_t q = static_cast<size_t>(quota.at(std::min(gen, quota.size() - 1)));
    for (size_t i = 0; i < s.entities.size(); ++i) {
      if (i < q) {
        out.entities.push_back({s.entities[i].type, s.entities[i].name});
      } else {
        out.entities.push_back({"T", "junk" + std::to_string(i)});
      }
    }
    return out;
  }

 private:
  static int Generation(const std::string& handle) {
    return std::stoi(handle.substr(1));
  }
};

// Minimal valid sample: every entity really occupies its span.
Sample BareNer(const std::string& id, int gold_entities) {
  Sample s;
  s.id = id;
  s.task = Task::kNer;
  s.dataset = "toy";
  for (int i = 0; i < gold_entities; ++i) {
    if (i) s.text += " ";
    const std::string name = "E" + std::to_string(i);
    const size_t start = s.text.size();
    s.text += name;
    s.entities.push_back({"T", name, start, s.text.size()});
  }
  s.text += " stand here.";
  return s;
}

std::vector<Sample> BareSet(const std::vector<std::string>& ids) {
  std::vector<Sample> out;
  out.reserve(ids.size());
  for (const auto& id : ids) out.push_back(BareNer(id, 1));
  return out;
}

// Scripted corpus: six pool samples with fixed losses, one ten-gold
// validation sample so each quota step moves val F1 by ten points.
struct ScriptedWorld {
  std::vector<Sample> train = BareSet({"tr0", "tr1", "tr2", "tr3"});
  std::vector<Sample> aug = BareSet({"a", "b", "c", "d", "e", "f"});
  std::vector<Sample> val = {BareNer("val0", 10)};

  ScriptedTrainer NewTrainer(std::vector<int> quota) const {
    ScriptedTrainer t;
    t.losses = {{"a", 5.0}, {"b", 1.0}, {"c", 3.0},
                {"d", 3.0}, {"e", 0.5}, {"f", 9.0}};
    t.quota = std::move(quota);
    return t;
  }
};

std::string WriteStub(const fs::path& dir, const std::string& name,
                      const std::string& body) {
  const fs::path path = dir / name;
  WriteFileAtomic(path, body);
  fs::permissions(path, fs::perms::owner_all | fs::perms::group_read |
                            fs::perms::group_exec | fs::perms::others_read |
                            fs::perms::others_exec);
  return path.string();
}

// Reference trainer stub honoring the run-directory protocol. Losses come
// from the numeric id suffix; predictions echo the gold entities. A mode.txt
// dropped into a run directory switches on one misbehavior.
const char kStubBody[] = R"PY(#!/usr/bin/env python3
import json, os, sys

verb, run = sys.argv[1], sys.argv[2]

def rows(name):
    out = []
    with open(os.path.join(run, name)) as f:
        for line in f:
            if line.strip():
                out.append(json.loads(line))
    return out

def mode():
    p = os.path.join(run, "mode.txt")
    return open(p).read().strip() if os.path.exists(p) else "ok"

if verb == "train":
    with open(os.path.join(run, "model.ref"), "w") as f:
        f.write("base\n")
elif verb == "finetune":
    parent = open(os.path.join(run, "parent.ref")).read().strip()
    with open(os.path.join(run, "model.ref"), "w") as f:
        f.write(parent + "+ft\n")
elif verb == "loss":
    m = mode()
    samples = rows("samples.jsonl")
    with open(os.path.join(run, "losses.tsv"), "w") as f:
        if m == "notab":
            f.write("%s 0.5\n" % samples[0]["id"])
        elif m == "badvalue":
            f.write("%s\tnot-a-number\n" % samples[0]["id"])
        else:
            if m == "missing":
                samples = samples[1:]
            for s in samples:
                f.write("%s\t%s\n" % (s["id"], float(s["id"][1:])))
            if m == "dup":
                f.write("%s\t1.0\n" % samples[0]["id"])
            if m == "extra":
                f.write("zz\t1.0\n")
elif verb == "predict":
    samples = rows("samples.jsonl")
    if mode() == "predict-missing":
        samples = samples[1:]
    with open(os.path.join(run, "predictions.jsonl"), "w") as f:
        for s in samples:
            ents = [{"type": e["type"], "name": e["name"]}
                    for e in s.get("entities", [])]
            f.write(json.dumps({"sample_id": s["id"], "parse_ok": True,
                                "raw_output": "", "entities": ents,
                                "triples": [], "events": []}) + "\n")
else:
    sys.exit(2)
)PY";

const char kFailingBody[] = R"PY(#!/usr/bin/env python3
import sys
sys.stderr.write("boom: cannot load weights\n")
sys.exit(7)
)PY";

const char kSleepyBody[] = R"PY(#!/usr/bin/env python3
import time
time.sleep(5)
)PY";

// Delegates every verb except finetune, which always fails.
std::string FlakyBody(const std::string& stub_path) {
  return "#!/usr/bin/env python3\n"
         "import os, sys\n"
         "if sys.argv[1] == \"finetune\":\n"
         "    sys.stderr.write(\"disk full\\n\")\n"
         "    sys.exit(7)\n"
         "os.execv(\"" + stub_path + "\", [\"" + stub_path + "\"] + sys.argv[1:])\n";
}

size_t CountRunDirs(const std::string& work_dir) {
  size_t n = 0;
  for (const auto& entry : fs::directory_iterator(work_dir)) {
    if (entry.is_directory() &&
        entry.path().filename().string().rfind("run", 0) == 0) {
      ++n;
    }
  }
  return n;
}

std::vector<std::string> Ids(const std::vector<Sample>& samples) {
  std::vector<std::string> ids;
  ids.reserve(samples.size());
  for (const auto& s : samples) ids.push_back(s.id);
  return ids;
}

}  // namespace

TEST_CASE("toy fixtures are valid against the schema") {
  const Schema schema = ToyNerSchema();
  const auto train = CleanTrain();
  const auto aug = AugPool(train);
  for (const auto& s : train) CHECK(ValidateSample(s, &schema).empty());
  for (const auto& s : aug) CHECK(ValidateSample(s, &schema).empty());
  for (const auto& s : HeldOut("v", 0)) CHECK(ValidateSample(s, &schema).empty());
  CHECK(train.size() == 32);
  CHECK(aug.size() == 64);
}

TEST_CASE("tokenizer yields byte spans over words and punctuation") {
  const std::string text = "EU rejects German call.";
  const auto tokens = TokenizeSpans(text);
  REQUIRE(tokens.size() == 5);
  CHECK(tokens[0] == TextToken{0, 2});
  CHECK(tokens[1] == TextToken{3, 10});
  CHECK(tokens[2] == TextToken{11, 17});
  CHECK(tokens[3] == TextToken{18, 22});
  CHECK(tokens[4] == TextToken{22, 23});
  CHECK(text.substr(tokens[4].start, 1) == ".");

  CHECK(TokenizeSpans("").empty());
  CHECK(TokenizeSpans("   ").empty());

  // Multi-byte UTF-8 stays inside one token.
  const std::string accented = "Ana, \xc3\xa9";
  const auto at = TokenizeSpans(accented);
  REQUIRE(at.size() == 3);
  CHECK(accented.substr(at[0].start, at[0].end - at[0].start) == "Ana");
  CHECK(accented.substr(at[1].start, at[1].end - at[1].start) == ",");
  CHECK(accented.substr(at[2].start, at[2].end - at[2].start) == "\xc3\xa9");
}

TEST_CASE("bio decoding rebuilds typed spans") {
  const std::string text = "John Smith lives in Paris";
  const auto tokens = TokenizeSpans(text);
  REQUIRE(tokens.size() == 5);

  const auto spans =
      DecodeBio(text, tokens, Tags({"B-PER", "I-PER", "O", "O", "B-LOC"}));
  REQUIRE(spans.size() == 2);
  CHECK(spans[0] == EntityAnn{"PER", "John Smith", 0, 10});
  CHECK(spans[1] == EntityAnn{"LOC", "Paris", 20, 25});

  // A dangling I- opens a span; an I- of a different type starts fresh.
  const auto dangling =
      DecodeBio(text, tokens, Tags({"I-PER", "O", "O", "O", "O"}));
  REQUIRE(dangling.size() == 1);
  CHECK(dangling[0] == EntityAnn{"PER", "John", 0, 4});

  const auto switched =
      DecodeBio(text, tokens, Tags({"B-PER", "I-LOC", "O", "O", "O"}));
  REQUIRE(switched.size() == 2);
  CHECK(switched[0] == EntityAnn{"PER", "John", 0, 4});
  CHECK(switched[1] == EntityAnn{"LOC", "Smith", 5, 10});

  CHECK(DecodeBio(text, tokens, Tags({"O", "O", "O", "O", "O"})).empty());
  CHECK_THROWS_AS(DecodeBio(text, tokens, Tags({"O", "O"})), std::invalid_argument);
}

TEST_CASE("top-beta selection orders by loss then id and rounds up") {
  const std::vector<LossRecord> records = {
      {"a", 0.9}, {"b", 0.5}, {"c", 0.7}, {"d", 0.1}};

  CHECK(SelectTopBeta(records, 0.5) == std::vector<std::string>{"a", "c"});
  CHECK(SelectTopBeta(records, 1.0) ==
        std::vector<std::string>{"a", "c", "b", "d"});
  // ceil(0.04) rounds up to a single pick.
  CHECK(SelectTopBeta(records, 0.01) == std::vector<std::string>{"a"});

  const std::vector<LossRecord> tied = {{"x", 0.5}, {"m", 0.5}, {"z", 0.9}};
  CHECK(SelectTopBeta(tied, 2.0 / 3.0) == std::vector<std::string>{"z", "m"});

  CHECK_THROWS_AS(SelectTopBeta({}, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(SelectTopBeta(records, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(SelectTopBeta(records, -0.2), std::invalid_argument);
  CHECK_THROWS_AS(SelectTopBeta(records, 1.2), std::invalid_argument);
}

TEST_CASE("an integral ratio never selects one extra record") {
  std::vector<LossRecord> records;
  records.reserve(1000);
  for (int i = 0; i < 1000; ++i) {
    records.push_back({"s" + std::to_string(i), static_cast<double>(i % 37)});
  }
  // 0.1 * 1000 lands a hair above 100 in doubles; ceil must not see 101.
  CHECK(SelectTopBeta(records, 0.1).size() == 100);
  CHECK(SelectTopBeta(records, 0.5).size() == 500);
  CHECK(SelectTopBeta(records, 1.0).size() == 1000);
}

TEST_CASE("selection size and order match an exact-arithmetic oracle") {
  Rng rng(DeriveSeed(407, {"lda", "select"}));
  for (int iter = 0; iter < 600; ++iter) {
    const size_t n = 1 + rng.Below(400);
    std::vector<LossRecord> records;
    records.reserve(n);
    for (size_t i = 0; i < n; ++i) {
      char id[16];
      std::snprintf(id, sizeof(id), "r%04u", static_cast<unsigned>(i));
      // Coarse quantization forces plenty of ties.
      records.push_back({id, static_cast<double>(rng.Below(50)) / 8.0});
    }
    const uint64_t num = 1 + rng.Below(16);  // ratio num/16 in (0, 1]
    const double beta = static_cast<double>(num) / 16.0;

    // Integer ceil of (num * n) / 16, immune to float rounding.
    const size_t want_k =
        std::max<size_t>(1, (static_cast<size_t>(num) * n + 15) / 16);

    std::vector<std::pair<double, std::string>> order;
    order.reserve(n);
    for (const auto& r : records) order.push_back({-r.loss, r.sample_id});
    std::sort(order.begin(), order.end());

    const auto got = SelectTopBeta(records, beta);
    REQUIRE(got.size() == std::min(want_k, n));
    for (size_t i = 0; i < got.size(); ++i) CHECK(got[i] == order[i].second);
  }
}

TEST_CASE("loss collection checks alignment and value sanity") {
  ScriptedWorld world;
  auto trainer = world.NewTrainer({10});

  CHECK(ComputeLosses(&trainer, "g0", {}).empty());

  const auto records = ComputeLosses(&trainer, "g0", world.aug);
  REQUIRE(records.size() == 6);
  CHECK(records[0] == LossRecord{"a", 5.0});
  CHECK(records[5] == LossRecord{"f", 9.0});

  trainer.losses["c"] = -0.25;
  CHECK_THROWS_WITH_AS(ComputeLosses(&trainer, "g0", world.aug),
                       doctest::Contains("invalid loss for sample \"c\""),
                       std::runtime_error);
  trainer.losses["c"] = std::nan("");
  CHECK_THROWS_AS(ComputeLosses(&trainer, "g0", world.aug), std::runtime_error);

  // A trainer that loses a record trips the size check.
  class Shorting : public ScriptedTrainer {
   public:
    std::vector<LossRecord> BatchLoss(const std::string& model,
                                      const std::vector<Sample>& samples) override {
      auto out = ScriptedTrainer::BatchLoss(model, samples);
      out.pop_back();
      return out;
    }
  };
  Shorting shorting;
  shorting.losses = trainer.losses;
  shorting.losses["c"] = 3.0;
  CHECK_THROWS_WITH_AS(ComputeLosses(&shorting, "g0", world.aug),
                       doctest::Contains("5 losses for 6 samples"),
                       std::runtime_error);

  // Reordered records trip the alignment check.
  class Swapping : public ScriptedTrainer {
   public:
    std::vector<LossRecord> BatchLoss(const std::string& model,
                                      const std::vector<Sample>& samples) override {
      auto out = ScriptedTrainer::BatchLoss(model, samples);
      std::swap(out.front(), out.back());
      return out;
    }
  };
  Swapping swapping;
  swapping.losses = shorting.losses;
  CHECK_THROWS_WITH_AS(ComputeLosses(&swapping, "g0", world.aug),
                       doctest::Contains("loss order mismatch at index 0"),
                       std::runtime_error);
}

TEST_CASE("validation f1 pools matches over the whole set") {
  ScriptedWorld world;
  auto trainer = world.NewTrainer({7});
  // 7 of 10 golds hit, 3 junk: precision = recall = 0.7.
  CHECK(ValidationF1(&trainer, "g0", world.val) == doctest::Approx(70.0));
  auto perfect = world.NewTrainer({10});
  CHECK(ValidationF1(&perfect, "g0", world.val) == doctest::Approx(100.0));
  CHECK_THROWS_AS(ValidationF1(&trainer, "g0", {}), std::invalid_argument);
}

TEST_CASE("selection loop runs until the gain falls under the threshold") {
  ScriptedWorld world;
  auto trainer = world.NewTrainer({7, 9, 9});
  LdaConfig cfg;
  cfg.beta0 = 0.5;
  cfg.delta = 0.5;
  cfg.max_iters = 8;

  const LdaState state = LdaLoop(&trainer, world.train, world.aug, world.val, cfg);

  CHECK(state.t == 2);
  REQUIRE(state.history.size() == 3);
  CHECK(state.history[0] == LdaIteration{0, 70.0, 0});
  CHECK(state.history[1] == LdaIteration{1, 90.0, 3});
  CHECK(state.history[2] == LdaIteration{2, 90.0, 2});
  CHECK(state.model_handle == "g2");
  CHECK(state.beta_t == doctest::Approx(0.125));
  CHECK(state.cumulative_selected_fraction == doctest::Approx(0.75));

  // The initial model trains on the clean split; each refit sees only the
  // top-loss slice, largest loss first, ties by id.
  CHECK(trainer.train_sizes == std::vector<size_t>{4});
  REQUIRE(trainer.finetune_ids.size() == 2);
  CHECK(trainer.finetune_ids[0] == std::vector<std::string>{"f", "a", "c"});
  CHECK(trainer.finetune_ids[1] == std::vector<std::string>{"f", "a"});
}

TEST_CASE("a gain below the threshold stops after one iteration") {
  ScriptedWorld world;
  auto trainer = world.NewTrainer({7, 9});
  LdaConfig cfg;
  cfg.beta0 = 0.5;
  cfg.delta = 25.0;  // the 20-point gain is not enough
  const LdaState state = LdaLoop(&trainer, world.train, world.aug, world.val, cfg);
  CHECK(state.t == 1);
  CHECK(state.history.size() == 2);
  CHECK(state.cumulative_selected_fraction == doctest::Approx(0.5));
  CHECK(trainer.finetune_ids.size() == 1);
}

TEST_CASE("a perfect initial model still refits once before stopping") {
  ScriptedWorld world;
  auto trainer = world.NewTrainer({10});
  LdaConfig cfg;
  cfg.beta0 = 0.1;
  const LdaState state = LdaLoop(&trainer, world.train, world.aug, world.val, cfg);
  CHECK(state.history[0].val_f1 == doctest::Approx(100.0));
  CHECK(state.t == 1);
  CHECK(state.history[1].val_f1 == doctest::Approx(100.0));
  CHECK(state.history[1].retrain_size == 1);  // ceil(0.1 * 6)
}

TEST_CASE("the iteration cap overrides an ever-improving run") {
  ScriptedWorld world;
  auto trainer = world.NewTrainer({0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  LdaConfig cfg;
  cfg.beta0 = 0.5;
  cfg.delta = 0.3;
  cfg.max_iters = 3;
  const LdaState state = LdaLoop(&trainer, world.train, world.aug, world.val, cfg);
  CHECK(state.t == 3);
  CHECK(state.history.size() == 4);
  CHECK(state.beta_t == doctest::Approx(0.0625));
  CHECK(state.cumulative_selected_fraction == doctest::Approx(0.875));
}

TEST_CASE("a fixed iteration count ignores the gain rule") {
  ScriptedWorld world;
  auto trainer = world.NewTrainer({7, 9, 9, 9});
  LdaConfig cfg;
  cfg.beta0 = 0.1;
  cfg.delta = 0.3;
  cfg.fixed_iters = 2;
  const LdaState state = LdaLoop(&trainer, world.train, world.aug, world.val, cfg);
  CHECK(state.t == 2);
  CHECK(state.history.size() == 3);
  // Two iterations spend the initial tenth plus half of it.
  CHECK(state.cumulative_selected_fraction == doctest::Approx(0.15));

  // The hard cap still wins over a larger fixed count.
  auto capped = world.NewTrainer({7, 9, 9, 9, 9, 9});
  cfg.fixed_iters = 5;
  cfg.max_iters = 2;
  CHECK(LdaLoop(&capped, world.train, world.aug, world.val, cfg).t == 2);
}

TEST_CASE("loop arguments are validated up front") {
  ScriptedWorld world;
  auto trainer = world.NewTrainer({10});
  LdaConfig cfg;

  LdaConfig bad = cfg;
  bad.beta0 = 0.0;
  CHECK_THROWS_AS(LdaLoop(&trainer, world.train, world.aug, world.val, bad),
                  std::invalid_argument);
  bad.beta0 = 1.5;
  CHECK_THROWS_AS(LdaLoop(&trainer, world.train, world.aug, world.val, bad),
                  std::invalid_argument);
  bad = cfg;
  bad.delta = -0.1;
  CHECK_THROWS_AS(LdaLoop(&trainer, world.train, world.aug, world.val, bad),
                  std::invalid_argument);
  bad = cfg;
  bad.max_iters = 0;
  CHECK_THROWS_AS(LdaLoop(&trainer, world.train, world.aug, world.val, bad),
                  std::invalid_argument);
  bad = cfg;
  bad.fixed_iters = 0;
  CHECK_THROWS_AS(LdaLoop(&trainer, world.train, world.aug, world.val, bad),
                  std::invalid_argument);

  CHECK_THROWS_AS(LdaLoop(&trainer, {}, world.aug, world.val, cfg),
                  std::invalid_argument);
  CHECK_THROWS_AS(LdaLoop(&trainer, world.train, {}, world.val, cfg),
                  std::invalid_argument);
  CHECK_THROWS_AS(LdaLoop(&trainer, world.train, world.aug, {}, cfg),
                  std::invalid_argument);

  auto dup_aug = world.aug;
  dup_aug.push_back(dup_aug.front());
  CHECK_THROWS_WITH_AS(LdaLoop(&trainer, world.train, dup_aug, world.val, cfg),
                       doctest::Contains("duplicate augmented sample"),
                       std::invalid_argument);

  auto leaky_val = world.val;
  leaky_val.push_back(world.train.front());
  CHECK_THROWS_WITH_AS(LdaLoop(&trainer, world.train, world.aug, leaky_val, cfg),
                       doctest::Contains("also appears in the training set"),
                       std::invalid_argument);
  leaky_val = world.val;
  leaky_val.push_back(world.aug.front());
  CHECK_THROWS_WITH_AS(LdaLoop(&trainer, world.train, world.aug, leaky_val, cfg),
                       doctest::Contains("also appears in the augmented pool"),
                       std::invalid_argument);
}

TEST_CASE("a checkpoint resumes without retraining the initial model") {
  ScriptedWorld world;
  const std::string state_dir = TempDir("scripted_resume");

  auto first = world.NewTrainer({7, 9, 9});
  LdaConfig cfg;
  cfg.beta0 = 0.5;
  cfg.delta = 0.5;
  cfg.fixed_iters = 1;
  cfg.state_dir = state_dir;
  const LdaState half = LdaLoop(&first, world.train, world.aug, world.val, cfg);
  CHECK(half.t == 1);
  CHECK(half.model_handle == "g1");

  // A new process would build a fresh trainer; generations live in the
  // handle, so the resumed loop picks up exactly where the checkpoint says.
  auto second = world.NewTrainer({7, 9, 9});
  cfg.fixed_iters = 2;
  const LdaState full = LdaLoop(&second, world.train, world.aug, world.val, cfg);
  CHECK(second.train_sizes.empty());
  CHECK(full.t == 2);
  REQUIRE(full.history.size() == 3);
  CHECK(full.history[0] == half.history[0]);
  CHECK(full.history[1] == half.history[1]);
  CHECK(full.model_handle == "g2");

  // The file on disk tracks the returned state.
  CHECK(LdaStateFromJson(ReadFile(fs::path(state_dir) / "state.json")) == full);
}

TEST_CASE("checkpoint json round trips and rejects nonsense") {
  LdaState state;
  state.t = 2;
  state.beta_t = 0.025;
  state.model_handle = "run007";
  state.cumulative_selected_fraction = 0.15;
  state.history = {{0, 61.5, 0}, {1, 70.25, 100}, {2, 70.3, 50}};
  CHECK(LdaStateFromJson(LdaStateToJson(state)) == state);

  LdaState short_history = state;
  short_history.history.pop_back();
  CHECK_THROWS_WITH_AS(LdaStateFromJson(LdaStateToJson(short_history)),
                       doctest::Contains("does not cover"),
                       std::invalid_argument);

  LdaState out_of_range = state;
  out_of_range.history[1].val_f1 = 150.0;
  CHECK_THROWS_WITH_AS(LdaStateFromJson(LdaStateToJson(out_of_range)),
                       doctest::Contains("F1 out of range"),
                       std::invalid_argument);
  out_of_range.history[1].val_f1 = -1.0;
  CHECK_THROWS_AS(LdaStateFromJson(LdaStateToJson(out_of_range)),
                  std::invalid_argument);
}

TEST_CASE("builtin trainer learns a separable tagging corpus") {
  const auto train = CleanTrain();
  BuiltinTrainer trainer(ToyNerSchema());
  const std::string m0 = trainer.Train(train);

  // The per-epoch curve covers every epoch and trends down.
  const auto& curve = trainer.LastTrainCurve();
  REQUIRE(curve.size() == static_cast<size_t>(BuiltinHyper{}.epochs));
  CHECK(curve.back() < curve.front());

  // Training data is memorized, offsets included, so the strict mode agrees.
  Counts strict;
  for (const auto& s : train) {
    strict += MatchItems(s, trainer.Predict(m0, s), MatchMode::kStrictOffset);
  }
  CHECK(MicroF1(strict).f1 == doctest::Approx(1.0));

  // Unseen combinations of seen names still resolve through the lexicon.
  const Sample unseen = PerFirst("u0", "Henry", "Rome");
  const auto pred = trainer.Predict(m0, unseen);
  REQUIRE(pred.entities.size() == 2);
  CHECK(pred.entities[0].name == "Henry");
  CHECK(pred.entities[0].type == "PER");
  REQUIRE(pred.entities[0].start.has_value());
  CHECK(*pred.entities[0].start == 0);
  CHECK(*pred.entities[0].end == 5);
  CHECK(pred.entities[1].type == "LOC");
  CHECK(pred.entities[1].name == "Rome");
}

TEST_CASE("builtin trainer drives loss near zero on one memorized sample") {
  BuiltinHyper hyper;
  hyper.epochs = 10;
  hyper.lr = 8.0;
  BuiltinTrainer trainer(ToyNerSchema(), hyper);
  const Sample solo = PerFirst("solo", "Alice", "Rome");
  const std::string handle = trainer.Train({solo});
  // The fitted margin grows with log of the step budget; a tenth of a
  // millinat means every token is called with near certainty.
  CHECK(trainer.Loss(handle, solo) < 1e-4);
}

TEST_CASE("builtin trainer is deterministic across instances") {
  const auto train = CleanTrain();
  const auto val = HeldOut("v", 0);

  BuiltinTrainer a(ToyNerSchema());
  BuiltinTrainer b(ToyNerSchema());
  const std::string ma = a.Train(train);
  const std::string mb = b.Train(train);
  CHECK(ma == mb);
  for (const auto& s : val) {
    CHECK(a.Predict(ma, s) == b.Predict(mb, s));
    CHECK(a.Loss(ma, s) == b.Loss(mb, s));
  }
}

TEST_CASE("builtin trainer rejects bad inputs") {
  BuiltinTrainer trainer(ToyNerSchema());
  CHECK_THROWS_AS(trainer.Train({}), std::invalid_argument);

  Sample off_label = PerFirst("bad", "Alice", "Rome");
  off_label.entities[0].type = "ORG";
  CHECK_THROWS_WITH_AS(trainer.Train({off_label}),
                       doctest::Contains("unknown label: ORG"),
                       std::runtime_error);

  Sample wrong_task = PerFirst("re0", "Alice", "Rome");
  wrong_task.task = Task::kRe;
  wrong_task.entities.clear();
  CHECK_THROWS_AS(trainer.Train({wrong_task}), std::invalid_argument);

  const Sample ok = PerFirst("ok", "Alice", "Rome");
  CHECK_THROWS_AS(trainer.Loss("m99", ok), std::invalid_argument);
  CHECK_THROWS_AS(trainer.Predict("m99", ok), std::invalid_argument);

  Schema empty;
  empty.dataset = "none";
  empty.task = Task::kNer;
  CHECK_THROWS_AS(BuiltinTrainer{empty}, std::invalid_argument);
}

TEST_CASE("builtin trainer classifies relations over gold pairs") {
  Schema schema;
  schema.dataset = "toy-re";
  schema.task = Task::kRe;
  schema.types = {{"works_for", "employment"}, {"born_in", "birthplace"}};

  const auto re_sample = [](const std::string& id, const std::string& head,
                            const std::string& tail, const std::string& rel) {
    Sample s;
    s.id = id;
    s.task = Task::kRe;
    s.dataset = "toy-re";
    s.text = rel == "works_for" ? head + " works for " + tail + "."
                                : head + " was born in " + tail + ".";
    s.triples.push_back({rel, head, tail});
    return s;
  };

  std::vector<Sample> train;
  const char* const orgs[] = {"Acme", "Globex", "Initech", "Umbrella"};
  for (int i = 0; i < 8; ++i) {
    train.push_back(re_sample("w" + std::to_string(i), kPer1[i], orgs[i % 4],
                              "works_for"));
    train.push_back(re_sample("b" + std::to_string(i), kPer1[7 - i], kLoc1[i],
                              "born_in"));
  }

  BuiltinTrainer trainer(schema, {});
  const std::string handle = trainer.Train(train);
  CHECK(trainer.Loss(handle, train.front()) < 0.5);

  // New name pairs, familiar phrasing.
  const Sample works = re_sample("q0", "Grace", "Initech", "works_for");
  const Sample born = re_sample("q1", "Bob", "Madrid", "born_in");
  const auto works_pred = trainer.Predict(handle, works);
  REQUIRE(works_pred.triples.size() == 1);
  CHECK(works_pred.triples[0] == PredTriple{"works_for", "Grace", "Initech"});
  const auto born_pred = trainer.Predict(handle, born);
  REQUIRE(born_pred.triples.size() == 1);
  CHECK(born_pred.triples[0].relation == "born_in");

  // No gold pairs means nothing to score.
  Sample bare = works;
  bare.triples.clear();
  CHECK(trainer.Loss(handle, bare) == 0.0);
  CHECK(trainer.Predict(handle, bare).triples.empty());
}

TEST_CASE("builtin trainer tags event triggers") {
  Schema schema;
  schema.dataset = "toy-ed";
  schema.task = Task::kEd;
  schema.types = {{"Attack", "violence"}, {"Meet", "gathering"}};

  const auto ed_sample = [](const std::string& id, const std::string& subject,
                            bool attack) {
    Sample s;
    s.id = id;
    s.task = Task::kEd;
    s.dataset = "toy-ed";
    const std::string verb = attack ? "attacked" : "met";
    s.text = subject + " " + verb + " the group at dawn.";
    const size_t start = subject.size() + 1;
    s.events.push_back({attack ? "Attack" : "Meet", verb, start,
                        start + verb.size()});
    return s;
  };

  std::vector<Sample> train;
  const char* const attackers[] = {"Rebels", "Soldiers", "Pirates", "Raiders"};
  const char* const meeters[] = {"Ministers", "Leaders", "Envoys", "Mayors"};
  for (int i = 0; i < 4; ++i) {
    train.push_back(ed_sample("a" + std::to_string(i), attackers[i], true));
    train.push_back(ed_sample("m" + std::to_string(i), meeters[i], false));
  }

  BuiltinTrainer trainer(schema, {});
  const std::string handle = trainer.Train(train);

  const Sample unseen = ed_sample("q0", "Bandits", true);
  const auto pred = trainer.Predict(handle, unseen);
  REQUIRE(pred.events.size() == 1);
  CHECK(pred.events[0].event_type == "Attack");
  CHECK(pred.events[0].trigger == "attacked");
  REQUIRE(pred.events[0].trigger_start.has_value());
  CHECK(*pred.events[0].trigger_start == unseen.events[0].trigger_start);
  CHECK(*pred.events[0].trigger_end == unseen.events[0].trigger_end);
}

TEST_CASE("replacement children dominate the high-loss slice") {
  const auto train = CleanTrain();
  const auto aug = AugPool(train);
  BuiltinTrainer trainer(ToyNerSchema());
  const std::string m0 = trainer.Train(train);

  const auto losses = ComputeLosses(&trainer, m0, aug);
  const auto top = SelectTopBeta(losses, 0.25);
  REQUIRE(top.size() == 16);
  size_t swaps = 0;
  for (const auto& id : top) {
    if (id.find("#P1") != std::string::npos) ++swaps;
  }
  // Unseen replacement names confuse the initial model far more than
  // lowercased copies of vocabulary it already knows.
  CHECK(swaps >= 12);
}

TEST_CASE("selection loop recovers f1 lost to unseen replacement names") {
  const auto train = CleanTrain();
  const auto aug = AugPool(train);
  const auto val = HeldOut("v", 0);
  const auto test = HeldOut("t", 2);

  BuiltinTrainer trainer(ToyNerSchema());
  LdaConfig cfg;
  cfg.beta0 = 0.25;
  cfg.delta = 0.5;
  cfg.max_iters = 4;
  const LdaState state = LdaLoop(&trainer, train, aug, val, cfg);

  CHECK(state.t >= 1);
  REQUIRE(state.history.size() == static_cast<size_t>(state.t) + 1);
  CHECK(state.history.front().retrain_size == 0);

  // Ratios halve every iteration and the spent fraction is their sum.
  double cum = 0.0;
  double beta = cfg.beta0;
  for (int i = 0; i < state.t; ++i) {
    CHECK(state.history[static_cast<size_t>(i) + 1].retrain_size ==
          static_cast<size_t>(std::ceil(beta * 64.0 - 1e-9)));
    cum += beta;
    beta /= 2.0;
  }
  CHECK(state.beta_t == doctest::Approx(beta));
  CHECK(state.cumulative_selected_fraction == doctest::Approx(cum));

  // Fine-tuning on hard children teaches the unseen names.
  const double before = state.history.front().val_f1;
  const double after = state.history.back().val_f1;
  CHECK(after >= before);
  CHECK(after >= 90.0);
  const double test_before = ValidationF1(&trainer, "m0", test);
  const double test_after = ValidationF1(&trainer, state.model_handle, test);
  CHECK(test_after >= test_before);
  CHECK(test_after >= 90.0);

  // The whole loop is a pure function of its seeds.
  BuiltinTrainer again(ToyNerSchema());
  CHECK(LdaLoop(&again, train, aug, val, cfg) == state);
}

TEST_CASE("builtin loop resumes mid run from its checkpoint") {
  const auto train = CleanTrain();
  const auto aug = AugPool(train);
  const auto val = HeldOut("v", 0);
  const std::string state_dir = TempDir("builtin_resume");

  BuiltinTrainer trainer(ToyNerSchema());
  LdaConfig cfg;
  cfg.beta0 = 0.25;
  cfg.state_dir = state_dir;
  cfg.fixed_iters = 1;
  const LdaState half = LdaLoop(&trainer, train, aug, val, cfg);
  CHECK(half.t == 1);
  CHECK(half.model_handle == "m1");

  // Handles live inside the trainer, so the same instance carries on.
  cfg.fixed_iters = 2;
  const LdaState full = LdaLoop(&trainer, train, aug, val, cfg);
  CHECK(full.t == 2);
  CHECK(full.model_handle == "m2");
  REQUIRE(full.history.size() == 3);
  CHECK(full.history[0] == half.history[0]);
  CHECK(full.history[1] == half.history[1]);
}

TEST_CASE("external trainer round trips the run-directory protocol") {
  const std::string dir = TempDir("ext_ok");
  const std::string stub = WriteStub(dir, "stub.py", kStubBody);

  ExternalTrainerConfig cfg;
  cfg.command = stub;
  cfg.work_dir = dir + "/work";
  ExternalTrainer trainer(cfg);

  const auto train = BareSet({"e0", "e1", "e2"});
  const std::string handle = trainer.Train(train);
  CHECK(fs::exists(fs::path(handle) / "train.jsonl"));
  CHECK(Trim(ReadFile(fs::path(handle) / "model.ref")) == "base");

  // Losses come back keyed by id and reordered to the input.
  const auto pool = BareSet({"e9", "e2", "e7"});
  const auto losses = trainer.BatchLoss(handle, pool);
  REQUIRE(losses.size() == 3);
  CHECK(losses[0] == LossRecord{"e9", 9.0});
  CHECK(losses[1] == LossRecord{"e2", 2.0});
  CHECK(losses[2] == LossRecord{"e7", 7.0});
  CHECK(trainer.Loss(handle, BareNer("e4", 1)) == doctest::Approx(4.0));

  // Predictions echo gold, so pooled F1 is perfect.
  CHECK(ValidationF1(&trainer, handle, pool) == doctest::Approx(100.0));

  // Fine-tuning records its parent reference and chains the model ref.
  const std::string child = trainer.Finetune(handle, BareSet({"e5"}));
  CHECK(child != handle);
  CHECK(Trim(ReadFile(fs::path(child) / "parent.ref")) == "base");
  CHECK(Trim(ReadFile(fs::path(child) / "model.ref")) == "base+ft");
  const auto retrained = LoadSamples(fs::path(child) / "retrain.jsonl");
  CHECK(Ids(retrained) == std::vector<std::string>{"e5"});
}

TEST_CASE("external trainer surfaces protocol violations") {
  const std::string dir = TempDir("ext_bad");
  const std::string stub = WriteStub(dir, "stub.py", kStubBody);

  ExternalTrainerConfig cfg;
  cfg.command = stub;
  cfg.work_dir = dir + "/work";
  ExternalTrainer trainer(cfg);
  const std::string handle = trainer.Train(BareSet({"e0", "e1"}));
  const auto pool = BareSet({"e0", "e1", "e2"});

  const auto with_mode = [&](const std::string& mode) {
    WriteFileAtomic(fs::path(handle) / "mode.txt", mode + "\n");
  };

  with_mode("notab");
  CHECK_THROWS_WITH_AS(trainer.BatchLoss(handle, pool),
                       doctest::Contains("expected sample_id TAB loss"),
                       std::runtime_error);
  with_mode("badvalue");
  CHECK_THROWS_WITH_AS(trainer.BatchLoss(handle, pool),
                       doctest::Contains("bad loss value"), std::runtime_error);
  with_mode("dup");
  CHECK_THROWS_WITH_AS(trainer.BatchLoss(handle, pool),
                       doctest::Contains("duplicate sample"), std::runtime_error);
  with_mode("missing");
  CHECK_THROWS_WITH_AS(trainer.BatchLoss(handle, pool),
                       doctest::Contains("no loss for sample \"e0\""),
                       std::runtime_error);
  with_mode("extra");
  // The stray id plus every requested one: same count, wrong key set would
  // already fail the lookup; here each lookup succeeds so the size trips.
  CHECK_THROWS_WITH_AS(trainer.BatchLoss(handle, pool),
                       doctest::Contains("unknown samples"), std::runtime_error);
  with_mode("predict-missing");
  CHECK_THROWS_WITH_AS(trainer.BatchPredict(handle, pool),
                       doctest::Contains("no prediction for sample"),
                       std::runtime_error);
  with_mode("ok");
  CHECK(trainer.BatchLoss(handle, pool).size() == 3);

  // A crashing command surfaces its exit code and stderr.
  const std::string failing = WriteStub(dir, "failing.py", kFailingBody);
  ExternalTrainerConfig bad = cfg;
  bad.command = failing;
  bad.work_dir = dir + "/work_failing";
  ExternalTrainer crashing(bad);
  try {
    crashing.Train(BareSet({"e0"}));
    FAIL("expected a throw");
  } catch (const std::runtime_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("exited with 7") != std::string::npos);
    CHECK(msg.find("boom: cannot load weights") != std::string::npos);
  }

  // A hung command is killed and reported as a timeout.
  const std::string sleepy = WriteStub(dir, "sleepy.py", kSleepyBody);
  ExternalTrainerConfig slow = cfg;
  slow.command = sleepy;
  slow.work_dir = dir + "/work_sleepy";
  slow.timeout_s = 0.3;
  ExternalTrainer hanging(slow);
  CHECK_THROWS_WITH_AS(hanging.Train(BareSet({"e0"})),
                       doctest::Contains("timed out"), std::runtime_error);

  CHECK_THROWS_AS(ExternalTrainer{ExternalTrainerConfig{}},
                  std::invalid_argument);
}

TEST_CASE("external loop completes and a finished checkpoint is a no-op") {
  const std::string dir = TempDir("ext_loop");
  const std::string stub = WriteStub(dir, "stub.py", kStubBody);
  const std::string work = dir + "/work";

  const auto train = BareSet({"e0", "e1", "e2"});
  const auto aug = BareSet({"e3", "e4", "e5", "e6", "e7", "e8"});
  const auto val = BareSet({"v0", "v1"});

  ExternalTrainerConfig tcfg;
  tcfg.command = stub;
  tcfg.work_dir = work;
  ExternalTrainer trainer(tcfg);

  LdaConfig cfg;
  cfg.beta0 = 0.5;
  cfg.delta = 0.3;
  cfg.state_dir = dir + "/state";
  const LdaState state = LdaLoop(&trainer, train, aug, val, cfg);

  // Gold-echo predictions hold F1 at 100, so one refit settles it.
  CHECK(state.t == 1);
  CHECK(state.history[0].val_f1 == doctest::Approx(100.0));
  CHECK(state.history[1].retrain_size == 3);
  CHECK(CountRunDirs(work) == 2);

  // The refit saw the three largest id digits, descending.
  const auto retrained = LoadSamples(fs::path(state.model_handle) / "retrain.jsonl");
  CHECK(Ids(retrained) == std::vector<std::string>{"e8", "e7", "e6"});

  // Rerunning against the finished checkpoint touches nothing.
  ExternalTrainer rerun(tcfg);
  const LdaState resumed = LdaLoop(&rerun, train, aug, val, cfg);
  CHECK(resumed == state);
  CHECK(CountRunDirs(work) == 2);
}

TEST_CASE("external loop recovers after a crashed fine-tune") {
  const std::string dir = TempDir("ext_crash");
  const std::string stub = WriteStub(dir, "stub.py", kStubBody);
  const std::string flaky = WriteStub(dir, "flaky.py", FlakyBody(stub));
  const std::string work = dir + "/work";

  const auto train = BareSet({"e0", "e1", "e2"});
  const auto aug = BareSet({"e3", "e4", "e5", "e6"});
  const auto val = BareSet({"v0"});

  LdaConfig cfg;
  cfg.beta0 = 0.5;
  cfg.fixed_iters = 1;
  cfg.state_dir = dir + "/state";

  ExternalTrainerConfig broken;
  broken.command = flaky;
  broken.work_dir = work;
  ExternalTrainer crashing(broken);
  try {
    LdaLoop(&crashing, train, aug, val, cfg);
    FAIL("expected a throw");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("disk full") != std::string::npos);
  }

  // The checkpoint still points at the initial model; the orphaned fine-tune
  // directory must not be reused for the retry.
  const LdaState half = LdaStateFromJson(ReadFile(fs::path(cfg.state_dir) / "state.json"));
  CHECK(half.t == 0);
  const size_t dirs_after_crash = CountRunDirs(work);

  ExternalTrainerConfig fixed = broken;
  fixed.command = stub;
  ExternalTrainer healthy(fixed);
  const LdaState state = LdaLoop(&healthy, train, aug, val, cfg);
  CHECK(state.t == 1);
  CHECK(state.history[0] == half.history[0]);
  CHECK(Trim(ReadFile(fs::path(state.model_handle) / "model.ref")) == "base+ft");
  CHECK(CountRunDirs(work) == dirs_after_crash + 1);
}

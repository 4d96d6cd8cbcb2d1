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

#ifndef IEFORGE_UTIL_RNG_H_
#define IEFORGE_UTIL_RNG_H_

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string_view>
#include <vector>

namespace ieforge {

// Derives a child seed from a root seed plus a list of string labels.
// Used to split one pipeline seed per stage / per sample id, so results do
// not depend on processing order or thread scheduling.
uint64_t DeriveSeed(uint64_t root, std::initializer_list<std::string_view> labels);

// Seeded RNG with portable bounded sampling. std::mt19937_64 produces a
// standard-defined sequence; the distributions here avoid
// std::uniform_int_distribution, whose output is implementation-defined.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }

  // Uniform integer in [0, n). n must be > 0.
  uint64_t Below(uint64_t n);

  // Uniform integer in [lo, hi] inclusive.
  int64_t Uniform(int64_t lo, int64_t hi);

  // Uniform real in [0, 1) with 53 bits of precision.
  double Real();

  // Fisher-Yates shuffle.
  template <typename T>
  void Shuffle(std::vector<T>* items) {
    if (items->empty()) return;
    for (size_t i = items->size() - 1; i > 0; --i) {
      size_t j = static_cast<size_t>(Below(i + 1));
      std::swap((*items)[i], (*items)[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ieforge

#endif  // IEFORGE_UTIL_RNG_H_

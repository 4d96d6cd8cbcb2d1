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

#include "util/rng.h"

#include <stdexcept>

namespace ieforge {

namespace {

uint64_t SplitMix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

uint64_t DeriveSeed(uint64_t root, std::initializer_list<std::string_view> labels) {
  // FNV-1a over the labels, mixed with the root via splitmix.
  uint64_t h = 0xcbf29ce484222325ULL;
  for (std::string_view label : labels) {
    for (unsigned char c : label) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    h ^= 0x1fULL;  // label separator
    h *= 0x100000001b3ULL;
  }
  return SplitMix64(root ^ h);
}

uint64_t Rng::Below(uint64_t n) {
  if (n == 0) throw std::invalid_argument("Rng::Below: n must be > 0");
  // Rejection sampling on the top of the range keeps the draw unbiased.
  const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  uint64_t v = engine_();
  while (v >= limit) v = engine_();
  return v % n;
}

int64_t Rng::Uniform(int64_t lo, int64_t hi) {
  if (lo > hi) throw std::invalid_argument("Rng::Uniform: lo > hi");
  return lo + static_cast<int64_t>(Below(static_cast<uint64_t>(hi - lo) + 1));
}

double Rng::Real() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

}  // namespace ieforge

// Copyright 2026 The BAAFE Authors
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

#ifndef BAAFE_RANDOM_H_
#define BAAFE_RANDOM_H_

#include <cstdint>
#include <random>
#include <string_view>
#include <utility>

namespace baafe {

// Seeded generator with platform-independent derived distributions. The
// standard <random> distributions are implementation-defined, so everything
// that must replay bit-identically goes through these helpers instead.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }

  // Uniform in [0, bound). bound must be nonzero.
  uint64_t UniformBelow(uint64_t bound);

  // Uniform in [0, 1) with 53 bits of resolution.
  double Uniform01() { return static_cast<double>(NextU64() >> 11) * 0x1.0p-53; }

  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform01(); }

  // Standard normal via Box-Muller.
  double Gaussian();

  template <typename It>
  void Shuffle(It first, It last) {
    auto n = static_cast<uint64_t>(last - first);
    for (uint64_t i = n; i > 1; --i) {
      uint64_t j = UniformBelow(i);
      using std::swap;
      swap(first[i - 1], first[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Mixes a base seed with a label into an independent child seed.
uint64_t DeriveSeed(uint64_t base, std::string_view label);
uint64_t DeriveSeed(uint64_t base, uint64_t index);

// Nondeterministic seed for production paths (keys, per-enrollment seeds).
uint64_t EntropySeed();

}  // namespace baafe

#endif  // BAAFE_RANDOM_H_

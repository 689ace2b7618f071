// Copyright (2026) the mipdive project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MIPDIVE_RNG_HPP_
#define MIPDIVE_RNG_HPP_

#include <cstdint>

namespace mipdive {

// Seeded 64-bit generator with the splitmix64 state transition:
//   state += 0x9E3779B97F4A7C15
//   z = state; z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   return z ^ (z >> 31)
// Every consumer of randomness in this library draws from this generator so
// that instances and experiments reproduce bit-identically across platforms
// and across reimplementations in other languages.
class SplitMix64 {
 public:
  explicit SplitMix64(uint64_t seed) : state_(seed) {}

  uint64_t next() {
    state_ += 0x9E3779B97F4A7C15ULL;
    uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53 bits of mantissa.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n). n must be positive. Uses plain modulo; the
  // bias for the n used here (<= a few thousand) is below 2^-50 and the
  // cross-language reproducibility of the simple rule matters more.
  uint64_t below(uint64_t n) { return next() % n; }

  // Uniform in [lo, hi].
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

 private:
  uint64_t state_;
};

// Mixes auxiliary identifiers into a base seed so that independent streams
// (per instance, per sample) stay decorrelated and order-independent.
inline uint64_t mix_seed(uint64_t base, uint64_t salt) {
  SplitMix64 rng(base ^ (0x9E3779B97F4A7C15ULL * (salt + 1)));
  return rng.next();
}

}  // namespace mipdive

#endif  // MIPDIVE_RNG_HPP_

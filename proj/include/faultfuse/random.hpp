/*
 * Copyright 2026 The FaultFuse Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef FAULTFUSE_RANDOM_HPP_
#define FAULTFUSE_RANDOM_HPP_

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <utility>
#include <vector>

namespace faultfuse {

inline std::uint64_t SplitMix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Thin wrapper over mt19937_64. The distributions are written out by hand so
// streams are identical across standard library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Independent stream for (seed, k0, k1, ...), e.g. (run seed, generation,
  // member index). Streams do not depend on evaluation order.
  static Rng Derive(std::uint64_t seed, std::initializer_list<std::uint64_t> keys) {
    std::uint64_t h = SplitMix64(seed);
    for (std::uint64_t k : keys) h = SplitMix64(h ^ SplitMix64(k + 0x632be59bd9b4e019ULL));
    return Rng(h);
  }

  std::uint64_t NextU64() { return engine_(); }

  // Uniform in [0, 1) with 53 random bits.
  double Uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Uniform integer in [0, n). n must be > 0.
  std::size_t Index(std::size_t n) {
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t r;
    do {
      r = engine_();
    } while (r >= limit);
    return static_cast<std::size_t>(r % bound);
  }

  bool Bernoulli(double p) { return Uniform() < p; }

  template <typename T>
  void Shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[Index(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace faultfuse

#endif  // FAULTFUSE_RANDOM_HPP_

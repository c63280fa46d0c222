/** Copyright 2026 The tkgbench Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * 	http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef TKGBENCH_RNG_HPP
#define TKGBENCH_RNG_HPP

#include <algorithm>
#include <cstdint>
#include <unordered_set>
#include <vector>

namespace tkgbench {

/// SplitMix64. Used instead of <random> distributions so that sampled
/// artifacts are byte-identical across standard library implementations.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound) {
    // Lemire's multiply-shift with rejection.
    auto product = static_cast<unsigned __int128>(next()) * bound;
    auto low = static_cast<std::uint64_t>(product);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        product = static_cast<unsigned __int128>(next()) * bound;
        low = static_cast<std::uint64_t>(product);
      }
    }
    return static_cast<std::uint64_t>(product >> 64);
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

/// Derives an independent stream for (seed, counter). Counter-based keying
/// makes per-item draws independent of processing order.
inline SplitMix64 keyed_stream(std::uint64_t seed, std::uint64_t counter) {
  SplitMix64 mixer(seed ^ 0x6a09e667f3bcc909ULL);
  const std::uint64_t a = mixer.next();
  SplitMix64 second(a ^ (counter * 0xd1b54a32d192ed03ULL));
  return SplitMix64(second.next());
}

/// k distinct values from [0, n), ascending (Floyd's algorithm).
inline std::vector<std::uint64_t> sample_distinct(std::uint64_t k,
                                                  std::uint64_t n,
                                                  SplitMix64& rng) {
  k = std::min(k, n);
  std::vector<std::uint64_t> out;
  if (k == n) {
    out.resize(n);
    for (std::uint64_t i = 0; i < n; ++i) out[i] = i;
    return out;
  }
  std::unordered_set<std::uint64_t> chosen;
  chosen.reserve(k * 2);
  for (std::uint64_t j = n - k; j < n; ++j) {
    const std::uint64_t t = rng.below(j + 1);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  out.assign(chosen.begin(), chosen.end());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace tkgbench

#endif  // TKGBENCH_RNG_HPP

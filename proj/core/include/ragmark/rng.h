// Copyright 2026 The ragmark Authors
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

#ifndef RAGMARK_RNG_H_
#define RAGMARK_RNG_H_

#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace ragmark {

/// Seeded generator whose draws are identical on every platform.
/// std::mt19937_64 is fully specified by the standard; the distributions are
/// not, so bounded integers and unit reals are derived here.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform integer in [0, bound). bound must be > 0. Rejection sampling
  /// removes modulo bias.
  std::uint64_t Below(std::uint64_t bound) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  /// Uniform real in [0, 1) with 53 bits of resolution.
  double Unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

/// First `count` elements of a seeded Fisher-Yates shuffle of `items`.
template <typename T>
std::vector<T> FisherYatesPrefix(std::vector<T> items, std::size_t count,
                                 std::uint64_t seed) {
  SeededRng rng(seed);
  const std::size_t n = items.size();
  for (std::size_t i = 0; i < count && i < n; ++i) {
    std::size_t j = i + static_cast<std::size_t>(rng.Below(n - i));
    std::swap(items[i], items[j]);
  }
  items.resize(count < n ? count : n);
  return items;
}

}  // namespace ragmark

#endif  // RAGMARK_RNG_H_

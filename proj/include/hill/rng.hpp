// Copyright 2026 The hillmech Authors
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

#ifndef HILL_RNG_HPP_
#define HILL_RNG_HPP_

// Counter-based random numbers. Every draw is a pure function of
// (seed, counters), so serial and parallel runs consume identical values
// and paired simulations can share option-draw streams.

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace hill {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline constexpr std::uint64_t hash_combine(std::uint64_t seed,
                                            std::uint64_t value) {
  return splitmix64(seed ^ splitmix64(value + 0x632be59bd9b4e019ULL));
}

template <typename... Ts>
constexpr std::uint64_t counter_hash(std::uint64_t seed, Ts... counters) {
  std::uint64_t h = splitmix64(seed);
  ((h = hash_combine(h, static_cast<std::uint64_t>(counters))), ...);
  return h;
}

// Maps 64 random bits to a double in the open interval (0, 1).
inline constexpr double bits_to_open_unit(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

// Standard normal from two uniforms (Box-Muller, cosine branch).
inline double normal_from_unit(double u1, double u2) {
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(2.0 * std::numbers::pi * u2);
}

// Seeded stream satisfying UniformRandomBitGenerator. Used wherever a
// caller-owned sequential generator is more natural than explicit counters.
class CounterStream {
 public:
  using result_type = std::uint64_t;

  explicit CounterStream(std::uint64_t seed) : seed_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() { return counter_hash(seed_, counter_++); }

  double uniform() { return bits_to_open_unit((*this)()); }

  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    return normal_from_unit(u1, u2);
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t position() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

// Canonical (0,1) draw from any 64-bit generator. std::generate_canonical is
// implementation-defined, which would break cross-platform reproducibility.
template <typename URBG>
double uniform01(URBG& gen) {
  static_assert(URBG::max() - URBG::min() ==
                    std::numeric_limits<std::uint64_t>::max(),
                "uniform01 expects a full 64-bit generator");
  return bits_to_open_unit(static_cast<std::uint64_t>(gen() - URBG::min()));
}

}  // namespace hill

#endif  // HILL_RNG_HPP_

//
// Copyright 2026 The SPriFed Authors
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

// Counter-based random streams.
//
// Every draw in the simulator is a pure function of (key, counter), where the
// key is derived from the master seed by hashing a path of purpose tags and
// indices. Client-level draws therefore do not depend on execution order or
// thread count: the noise of client i in release r for coordinate k is the
// same no matter who computes it or when.

#ifndef SPRIFED_RNG_HPP_
#define SPRIFED_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string_view>

namespace sprifed {

// SplitMix64 finalizer; a bijection on 64-bit words with full avalanche.
constexpr uint64_t Mix64(uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// FNV-1a hash of a purpose string, usable at compile time.
constexpr uint64_t Tag(std::string_view name) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : name) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

constexpr uint64_t DeriveKey(uint64_t parent) { return parent; }

// DeriveKey(seed, Tag("noise"), release, coordinate) -> sub-stream key.
template <typename... Rest>
constexpr uint64_t DeriveKey(uint64_t parent, uint64_t part, Rest... rest) {
  const uint64_t child =
      Mix64(parent ^ Mix64(part + 0x9e3779b97f4a7c15ULL) ^ 0x632be59bd9b4e019ULL);
  return DeriveKey(child, static_cast<uint64_t>(rest)...);
}

// A keyed stream. Satisfies UniformRandomBitGenerator for use with <random>
// and <algorithm>, and additionally offers random access by counter.
class Stream {
 public:
  using result_type = uint64_t;

  explicit Stream(uint64_t key) : key_(key) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() { return BitsAt(counter_++); }

  uint64_t key() const { return key_; }

  uint64_t BitsAt(uint64_t counter) const {
    return Mix64(key_ + Mix64(counter ^ 0xd1b54a32d192ed03ULL));
  }

  // Uniform on the open interval (0, 1), 53 bits of resolution.
  double UniformAt(uint64_t counter) const {
    return (static_cast<double>(BitsAt(counter) >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal draw number `index` (Box-Muller on counters 2i, 2i+1 of
  // the normal half of the counter space, disjoint from operator()).
  double NormalAt(uint64_t index) const {
    constexpr uint64_t kNormalSpace = 1ULL << 63;
    const double u1 = UniformAt(kNormalSpace | (2 * index));
    const double u2 = UniformAt(kNormalSpace | (2 * index + 1));
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  // Sequential standard normal (consumes the next index).
  double Normal() { return NormalAt(normal_index_++); }

  // Uniform integer in [0, bound), bound > 0. Lemire's nearly divisionless
  // method with rejection, so the result is exactly uniform.
  uint64_t UniformInt(uint64_t bound) {
    for (;;) {
      const unsigned __int128 m =
          static_cast<unsigned __int128>((*this)()) * bound;
      const uint64_t low = static_cast<uint64_t>(m);
      if (low >= bound || low >= (-bound) % bound) {
        return static_cast<uint64_t>(m >> 64);
      }
    }
  }

 private:
  uint64_t key_;
  uint64_t counter_ = 0;
  uint64_t normal_index_ = 0;
};

}  // namespace sprifed

#endif  // SPRIFED_RNG_HPP_

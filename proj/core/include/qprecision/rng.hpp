// Copyright 2026 The qprecision Authors
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

#pragma once

#include <cstdint>

namespace qprecision {

/// Counter-based generator: the n-th output of a stream is a SplitMix64
/// finalisation of (key + n * golden). Streams are keyed by
/// (seed, purpose tag, index), so independent experiments never share or
/// perturb each other's draws.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t tag, std::uint64_t index)
      : key_(mix(mix(seed ^ 0x9e3779b97f4a7c15ULL) ^ mix(tag + 0x632be59bd9b4e019ULL) ^
                 mix(index + 0xd1b54a32d192ed03ULL))) {}

  std::uint64_t next() { return mix(key_ + (counter_++) * 0x9e3779b97f4a7c15ULL); }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi] (inclusive), rejection sampled.
  std::uint64_t integer(std::uint64_t lo, std::uint64_t hi) {
    const std::uint64_t span = hi - lo + 1;
    if (span == 0) return next();
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x;
    do {
      x = next();
    } while (x >= limit);
    return lo + x % span;
  }

  std::uint64_t counter() const noexcept { return counter_; }

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

// Purpose tags for the stream key.
namespace rng_tag {
inline constexpr std::uint64_t kModel = 0x6d6f64656cULL;
inline constexpr std::uint64_t kObservable = 0x6f6273ULL;
inline constexpr std::uint64_t kMonteCarlo = 0x6d63ULL;
inline constexpr std::uint64_t kLindblad = 0x6c696e64ULL;
inline constexpr std::uint64_t kInitialState = 0x696e6974ULL;
}  // namespace rng_tag

}  // namespace qprecision

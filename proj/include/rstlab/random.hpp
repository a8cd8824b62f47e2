// Copyright 2026 The rstlab Authors
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

// Counter-based stream derivation.
//
// Every random quantity in the lab is drawn from a Stream whose 64-bit key is
// a pure function of (global seed, purpose tag, indices). Keys are derived
// with the SplitMix64 finalizer, so a trial or a lattice cell always sees the
// same numbers regardless of which worker realizes it or in what order.

#ifndef RSTLAB_RANDOM_HPP_
#define RSTLAB_RANDOM_HPP_

#include <cstdint>
#include <initializer_list>
#include <limits>
#include <span>

namespace rstlab {

/// SplitMix64 output finalizer (Steele, Lea, Flood; constants from Vigna).
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * UINT64_C(0xBF58476D1CE4E5B9);
  z = (z ^ (z >> 27)) * UINT64_C(0x94D049BB133111EB);
  return z ^ (z >> 31);
}

/// Purpose tags keep streams for different consumers disjoint.
enum class StreamTag : std::uint64_t {
  kBallSample = 0x62616c6c,   // "ball"
  kCell = 0x63656c6c,         // "cell"
  kResample = 0x72736d70,     // "rsmp"
  kTrial = 0x7472696c,        // "tril"
  kFuzz = 0x66757a7a,         // "fuzz"
};

constexpr std::uint64_t kGolden = UINT64_C(0x9E3779B97F4A7C15);

/// Folds a sequence of words into a stream key.
constexpr std::uint64_t stream_key(std::uint64_t seed, StreamTag tag,
                                   std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = mix64(seed + kGolden);
  h = mix64(h ^ (static_cast<std::uint64_t>(tag) + kGolden));
  for (std::uint64_t p : parts) h = mix64(h ^ mix64(p + kGolden));
  return h;
}

inline std::uint64_t stream_key(std::uint64_t seed, StreamTag tag,
                                std::span<const std::int64_t> parts) {
  std::uint64_t h = mix64(seed + kGolden);
  h = mix64(h ^ (static_cast<std::uint64_t>(tag) + kGolden));
  for (std::int64_t p : parts) {
    h = mix64(h ^ mix64(static_cast<std::uint64_t>(p) + kGolden));
  }
  return h;
}

/// SplitMix64 generator seeded by a derived key. Satisfies
/// UniformRandomBitGenerator so it plugs into Boost.Random distributions.
class Stream {
 public:
  using result_type = std::uint64_t;

  explicit Stream(std::uint64_t key) : state_(key) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() {
    state_ += kGolden;
    return mix64(state_);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

}  // namespace rstlab

#endif  // RSTLAB_RANDOM_HPP_

// Copyright 2026 The qdecay Authors
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

#ifndef QDECAY_RANDOM_HPP_
#define QDECAY_RANDOM_HPP_

#include <cstdint>
#include <limits>

namespace qdecay {

// Counter-based generator: the n-th output is a SplitMix64 finalizer applied
// to key + n * golden_gamma, so any position of the sequence is addressable
// and substreams are derived by hashing an index into the key.
//
// Satisfies UniformRandomBitGenerator, so it can drive <random> distributions.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t seed = 0) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept;

  // Independent stream for a replica or purpose. Depends only on this
  // stream's key and `index`, never on how many values were drawn.
  RandomStream substream(std::uint64_t index) const noexcept;

  // Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept;

  std::uint64_t key() const noexcept { return key_; }
  std::uint64_t counter() const noexcept { return counter_; }

  friend bool operator==(const RandomStream&, const RandomStream&) = default;

 private:
  RandomStream(std::uint64_t key, std::uint64_t counter) noexcept
      : key_(key), counter_(counter) {}

  std::uint64_t key_;
  std::uint64_t counter_;
};

// SplitMix64 output finalizer.
std::uint64_t mix64(std::uint64_t z) noexcept;

}  // namespace qdecay

#endif  // QDECAY_RANDOM_HPP_

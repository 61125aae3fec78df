// Copyright 2026 The ddos-embed Authors
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

#ifndef DDOS_RANDOM_HPP_
#define DDOS_RANDOM_HPP_

#include <cstdint>
#include <random>

namespace ddos {

using Rng = std::mt19937_64;

// Named sub-streams so that one user seed can drive independent consumers
// (edge split, parameter init, batch sampling, ...) without correlation.
enum class Stream : std::uint32_t {
  kEdgeSplit = 1,
  kInit = 2,
  kBatches = 3,
  kNonEdgesTrain = 4,
  kNonEdgesTest = 5,
  kGap = 6,
  kGradCheck = 7,
  kUser = 8,
};

inline Rng MakeRng(std::uint64_t seed, Stream stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream)};
  return Rng(seq);
}

// A 64-bit seed for a consumer that only accepts plain seeds.
inline std::uint64_t DeriveSeed(std::uint64_t seed, Stream stream) {
  Rng rng = MakeRng(seed, stream);
  return rng();
}

}  // namespace ddos

#endif  // DDOS_RANDOM_HPP_

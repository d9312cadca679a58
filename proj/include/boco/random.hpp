// Copyright 2026 The BOCO Authors
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

#ifndef BOCO_RANDOM_HPP_
#define BOCO_RANDOM_HPP_

#include <cstdint>
#include <random>
#include <span>

#include <Eigen/Core>

namespace boco {

// Independent sub-streams used by one trial. Frameworks evaluated on the same
// trial index share the kData stream, so their data are paired.
enum class StreamTag : std::uint64_t {
  kData = 1,
  kPrior = 2,
  kMh = 3,
  kBgs = 4,
  kDfl = 5,
  kInit = 6,
};

// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

// Seed of an independent stream: mix64(mix64(mix64(base) ^ trial) ^ tag).
std::uint64_t derive_seed(std::uint64_t base_seed, std::uint64_t trial_index,
                          StreamTag tag);

// Deterministic random stream. All variates are derived from the raw 64-bit
// output of std::mt19937_64 (whose sequence is fixed by the standard), so a
// seed reproduces the same numbers on every platform:
//   uniform01    = (x >> 11) * 2^-53              in [0, 1)
//   normal       = Box-Muller, cosine branch only, two uniforms per draw
//   categorical  = inverse CDF over the weight vector, one uniform per draw
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed = 0) : engine_(seed) {}

  double uniform01();
  double normal();
  std::size_t categorical(std::span<const double> weights);

  template <typename Derived>
  void fill_normal(Derived& out) {
    for (Eigen::Index i = 0; i < out.size(); ++i) out(i) = normal();
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace boco

#endif  // BOCO_RANDOM_HPP_

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

#include <array>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "boco/random.hpp"
#include "doctest.h"

namespace {

using boco::RandomStream;
using boco::StreamTag;

TEST_CASE("mix64 matches the SplitMix64 reference outputs") {
  // First outputs of the reference SplitMix64 generator seeded with 0 are
  // mix64(0), mix64(gamma), ... since the generator adds gamma before mixing.
  CHECK(boco::mix64(0) == 0xE220A8397B1DCDAFULL);
  CHECK(boco::mix64(0x9E3779B97F4A7C15ULL) == 0x6E789E6AA1B965F4ULL);
}

TEST_CASE("derive_seed separates trials and tags") {
  std::set<std::uint64_t> seeds;
  for (std::uint64_t trial = 0; trial < 50; ++trial) {
    for (auto tag : {StreamTag::kData, StreamTag::kPrior, StreamTag::kMh,
                     StreamTag::kBgs, StreamTag::kDfl, StreamTag::kInit}) {
      seeds.insert(boco::derive_seed(7, trial, tag));
    }
  }
  CHECK(seeds.size() == 300);
  CHECK(boco::derive_seed(1, 2, StreamTag::kData) ==
        boco::derive_seed(1, 2, StreamTag::kData));
}

TEST_CASE("uniform01 is the top 53 bits of mt19937_64") {
  std::mt19937_64 reference(42);
  RandomStream stream(42);
  for (int i = 0; i < 100; ++i) {
    const double expected =
        static_cast<double>(reference() >> 11) / 9007199254740992.0;
    CHECK(stream.uniform01() == expected);
  }
}

TEST_CASE("normal uses the Box-Muller cosine branch") {
  std::mt19937_64 reference(3);
  RandomStream stream(3);
  for (int i = 0; i < 50; ++i) {
    const double u1 = 1.0 - static_cast<double>(reference() >> 11) / 9007199254740992.0;
    const double u2 = static_cast<double>(reference() >> 11) / 9007199254740992.0;
    const double expected =
        std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    CHECK(stream.normal() == doctest::Approx(expected).epsilon(1e-15));
  }
}

TEST_CASE("normal moments") {
  RandomStream stream(11);
  const int n = 200000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = stream.normal();
    sum += v;
    sum2 += v * v;
  }
  CHECK(std::abs(sum / n) < 0.01);
  CHECK(std::abs(sum2 / n - 1.0) < 0.02);
}

TEST_CASE("categorical never returns a zero-weight index") {
  RandomStream stream(5);
  const std::array<double, 4> w{0.0, 0.5, 0.0, 0.5};
  for (int i = 0; i < 10000; ++i) {
    const auto k = stream.categorical(w);
    CHECK((k == 1 || k == 3));
  }
  const std::array<double, 3> point{0.0, 0.0, 1.0};
  CHECK(stream.categorical(point) == 2);
}

}  // namespace

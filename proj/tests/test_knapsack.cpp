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
#include <random>
#include <vector>

#include "boco/knapsack.hpp"
#include "doctest.h"
#include "oracles.hpp"

namespace {

using boco::Decision;
using boco::IntVec4;
using boco::KnapsackInstance;
using boco::Mat34;
using boco::ScenarioSet;
using boco::Vec3;

IntVec4 z_of(int a, int b, int c, int d) { return IntVec4(a, b, c, d); }

std::array<int, 4> as_array(const IntVec4& z) { return {z(0), z(1), z(2), z(3)}; }

Mat34 random_matrix(std::mt19937_64& gen, double lo, double hi) {
  Mat34 m;
  boco::oracle::fill_uniform(m, gen, lo, hi);
  return m;
}

ScenarioSet random_scenarios(std::mt19937_64& gen, int n, double lo,
                             double hi, double alpha) {
  ScenarioSet s;
  s.alpha = alpha;
  std::uniform_real_distribution<double> wd(0.05, 1.0);
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    s.matrices.push_back(random_matrix(gen, lo, hi));
    s.weights.push_back(wd(gen));
    total += s.weights.back();
  }
  for (double& w : s.weights) w /= total;
  return s;
}

TEST_CASE("evaluate_reward examples") {
  const KnapsackInstance inst;
  auto r = boco::evaluate_reward(IntVec4::Zero(), Mat34::Constant(2.0), inst);
  CHECK(r.feasible);
  CHECK(r.reward == 72.0);
  r = boco::evaluate_reward(z_of(8, 0, 0, 0), Mat34::Constant(1.0), inst);
  CHECK(r.feasible);
  CHECK(r.reward == 96.0);
  r = boco::evaluate_reward(z_of(5, 0, 0, 0), Mat34::Constant(2.0), inst);
  CHECK_FALSE(r.feasible);
  CHECK(r.reward == 0.0);
}

TEST_CASE("feasibility uses exact comparison") {
  const Vec3 b = Vec3::Constant(8.0);
  CHECK(boco::is_feasible(z_of(4, 0, 0, 0), Mat34::Constant(2.0), b));
  CHECK_FALSE(boco::is_feasible(z_of(4, 0, 0, 0),
                                Mat34::Constant(2.0 + 1e-15), b));
}

TEST_CASE("solve_deterministic examples") {
  const KnapsackInstance inst;
  Decision d = boco::solve_deterministic(Mat34::Constant(1.0), inst);
  CHECK(d.objective == 96.0);
  CHECK(d.z == z_of(0, 0, 0, 8));
  d = boco::solve_deterministic(Mat34::Constant(2.0), inst);
  CHECK(d.objective == 72.0);
  CHECK(d.z == IntVec4::Zero());
  d = boco::solve_deterministic(Mat34::Constant(100.0), inst);
  CHECK(d.objective == 72.0);
  CHECK(d.z == IntVec4::Zero());
}

TEST_CASE("solve_deterministic argument errors") {
  const KnapsackInstance inst;
  CHECK_THROWS_AS(boco::solve_deterministic(Mat34::Constant(1.0), inst, -1),
                  boco::ArgumentError);
  KnapsackInstance bad;
  bad.b(1) = 0.0;
  CHECK_THROWS_AS(boco::solve_deterministic(Mat34::Constant(1.0), bad),
                  boco::ArgumentError);
  bad = KnapsackInstance{};
  bad.c(0) = -1.0;
  CHECK_THROWS_AS(bad.validate(), boco::ArgumentError);
}

TEST_CASE("zCap = 0 admits only the zero decision") {
  const Decision d = boco::solve_deterministic(Mat34::Constant(0.5),
                                               KnapsackInstance{}, 0);
  CHECK(d.z == IntVec4::Zero());
  CHECK(d.objective == 72.0);
}

TEST_CASE("solve_chance examples") {
  KnapsackInstance inst;
  ScenarioSet s;
  s.matrices = {Mat34::Constant(1.0), Mat34::Constant(2.0)};
  s.weights = {0.5, 0.5};
  s.alpha = 0.9;
  Decision d = boco::solve_chance(s, inst);
  CHECK(d.z == IntVec4::Zero());
  CHECK(d.objective == 72.0);

  inst.c = boco::Vec4::Constant(100.0);
  s.matrices = {Mat34::Constant(1.0), Mat34::Constant(100.0)};
  s.alpha = 0.5;
  d = boco::solve_chance(s, inst);
  CHECK(d.z == z_of(0, 0, 0, 8));
  CHECK(d.objective == 400.0);
}

TEST_CASE("solve_chance argument errors") {
  const KnapsackInstance inst;
  ScenarioSet empty;
  CHECK_THROWS_AS(boco::solve_chance(empty, inst), boco::ArgumentError);
  ScenarioSet mismatch;
  mismatch.matrices = {Mat34::Constant(1.0)};
  mismatch.weights = {0.5, 0.5};
  CHECK_THROWS_AS(boco::solve_chance(mismatch, inst), boco::ArgumentError);
  ScenarioSet ok;
  ok.matrices = {Mat34::Constant(1.0)};
  ok.weights = {1.0};
  CHECK_THROWS_AS(boco::solve_chance(ok, inst, -3), boco::ArgumentError);
}

TEST_CASE("single scenario degenerates to the deterministic solve") {
  std::mt19937_64 gen(7);
  const KnapsackInstance inst;
  for (int rep = 0; rep < 100; ++rep) {
    const Mat34 a = random_matrix(gen, 0.3, 2.0);
    for (double alpha : {0.05, 0.5, 0.9, 1.0}) {
      ScenarioSet s;
      s.matrices = {a};
      s.weights = {1.0};
      s.alpha = alpha;
      const Decision c = boco::solve_chance(s, inst, 12);
      const Decision d = boco::solve_deterministic(a, inst, 12);
      CHECK(c.z == d.z);
      CHECK(c.objective == d.objective);
    }
  }
}

TEST_CASE("hindsight and regret examples") {
  const KnapsackInstance inst;
  CHECK(boco::hindsight_optimum(Mat34::Constant(1.0), inst).objective == 96.0);
  CHECK(boco::hindsight_optimum(Mat34::Constant(2.0), inst).objective == 72.0);
  Mat34 blocked = Mat34::Constant(1.0);
  blocked.row(1).setConstant(100.0);
  const Decision h = boco::hindsight_optimum(blocked, inst);
  CHECK(h.objective == 72.0);
  CHECK(h.z == IntVec4::Zero());

  const Mat34 ones = Mat34::Constant(1.0);
  CHECK(boco::regret(boco::hindsight_optimum(ones, inst).z, ones, inst) == 0.0);
  CHECK(boco::regret(IntVec4::Zero(), ones, inst) == 24.0);
  CHECK(boco::regret(z_of(5, 0, 0, 0), Mat34::Constant(2.0), inst) == 72.0);
  CHECK(boco::regret(z_of(5, 0, 0, 0), Mat34::Constant(2.0), inst, 72.0) == 72.0);
}

TEST_CASE("hindsight handles entries below one") {
  const KnapsackInstance inst;
  const Mat34 half = Mat34::Constant(0.5);
  const Decision h = boco::hindsight_optimum(half, inst);
  const auto bf = boco::oracle::brute_force_deterministic(half, inst.c, inst.b,
                                                          inst.q, 16);
  CHECK(h.objective == bf.value);
  CHECK(as_array(h.z) == bf.z);
}

TEST_CASE("deterministic solver equals unpruned enumeration") {
  std::mt19937_64 gen(11);
  const KnapsackInstance inst;
  for (int rep = 0; rep < 60; ++rep) {
    const Mat34 a = random_matrix(gen, 0.5, 3.0);
    const Decision d = boco::solve_deterministic(a, inst, 10);
    const auto bf = boco::oracle::brute_force_deterministic(a, inst.c, inst.b,
                                                            inst.q, 10);
    REQUIRE(bf.found);
    CHECK(d.objective == bf.value);
    CHECK(as_array(d.z) == bf.z);
  }
}

TEST_CASE("chance solver equals unpruned enumeration") {
  std::mt19937_64 gen(12);
  const KnapsackInstance inst;
  std::uniform_int_distribution<int> nd(1, 5);
  std::uniform_real_distribution<double> ad(0.3, 0.95);
  for (int rep = 0; rep < 60; ++rep) {
    const ScenarioSet s = random_scenarios(gen, nd(gen), 0.5, 3.0, ad(gen));
    const Decision d = boco::solve_chance(s, inst, 10);
    const auto bf = boco::oracle::brute_force_chance(
        s.matrices, s.weights, s.alpha, inst.c, inst.b, inst.q, 10);
    REQUIRE(bf.found);
    CHECK(d.objective == doctest::Approx(bf.value).epsilon(1e-12));
    CHECK(as_array(d.z) == bf.z);
    CHECK(boco::feasible_mass(d.z, s, inst.b) >= s.alpha - 1e-12);
  }
}

TEST_CASE("solvers handle weight matrices of any sign") {
  std::mt19937_64 gen(13);
  KnapsackInstance inst;
  std::uniform_int_distribution<int> nd(1, 3);
  for (int rep = 0; rep < 40; ++rep) {
    const Mat34 a = random_matrix(gen, -1.0, 2.5);
    const Decision d = boco::solve_deterministic(a, inst, 6);
    const auto bf = boco::oracle::brute_force_deterministic(a, inst.c, inst.b,
                                                            inst.q, 6);
    CHECK(d.objective == bf.value);
    CHECK(as_array(d.z) == bf.z);

    const ScenarioSet s = random_scenarios(gen, nd(gen), -1.0, 2.5, 0.6);
    const Decision c = boco::solve_chance(s, inst, 6);
    const auto bfc = boco::oracle::brute_force_chance(
        s.matrices, s.weights, s.alpha, inst.c, inst.b, inst.q, 6);
    CHECK(c.objective == doctest::Approx(bfc.value).epsilon(1e-12));
    CHECK(as_array(c.z) == bfc.z);
  }
}

TEST_CASE("chance constraint holds on random posterior-like sets") {
  std::mt19937_64 gen(14);
  const KnapsackInstance inst;
  for (int rep = 0; rep < 30; ++rep) {
    const ScenarioSet s = random_scenarios(gen, 20, 0.2, 2.0, 0.9);
    const Decision d = boco::solve_chance(s, inst);
    CHECK((d.z.array() >= 0).all());
    CHECK(boco::feasible_mass(d.z, s, inst.b) >= 0.9 - 1e-12);
  }
}

TEST_CASE("monotone infeasibility for positive weights") {
  std::mt19937_64 gen(15);
  const Vec3 b = Vec3::Constant(8.0);
  std::uniform_int_distribution<int> zd(0, 6);
  for (int rep = 0; rep < 500; ++rep) {
    const Mat34 a = random_matrix(gen, 0.1, 3.0);
    const IntVec4 z(zd(gen), zd(gen), zd(gen), zd(gen));
    if (boco::is_feasible(z, a, b)) continue;
    IntVec4 bigger = z;
    bigger(rep % 4) += 1 + rep % 3;
    CHECK_FALSE(boco::is_feasible(bigger, a, b));
  }
}

TEST_CASE("reward never exceeds 96 when every weight is at least one") {
  std::mt19937_64 gen(16);
  const KnapsackInstance inst;
  std::uniform_int_distribution<int> zd(0, 8);
  for (int rep = 0; rep < 2000; ++rep) {
    const Mat34 a = random_matrix(gen, 1.0, 3.0);
    const IntVec4 z(zd(gen), zd(gen), zd(gen), zd(gen));
    const auto r = boco::evaluate_reward(z, a, inst);
    CHECK(r.reward <= 72.0 + 3.0 * z.sum() + 1e-9);
    CHECK(r.reward <= 96.0 + 1e-9);
    const double reg = boco::regret(z, a, inst);
    CHECK(reg >= 0.0);
    CHECK(reg <= 96.0);
  }
}

TEST_CASE("repeated solves are identical") {
  std::mt19937_64 gen(17);
  const KnapsackInstance inst;
  const ScenarioSet s = random_scenarios(gen, 5, 0.5, 2.0, 0.8);
  const Decision first = boco::solve_chance(s, inst);
  for (int i = 0; i < 5; ++i) {
    const Decision again = boco::solve_chance(s, inst);
    CHECK(again.z == first.z);
    CHECK(again.objective == first.objective);
  }
}

TEST_CASE("solve counter tracks deterministic solves only") {
  boco::reset_deterministic_solve_count();
  const KnapsackInstance inst;
  boco::solve_deterministic(Mat34::Constant(1.0), inst);
  boco::solve_deterministic(Mat34::Constant(2.0), inst);
  boco::hindsight_optimum(Mat34::Constant(1.0), inst);
  ScenarioSet s;
  s.matrices = {Mat34::Constant(1.0)};
  s.weights = {1.0};
  boco::solve_chance(s, inst);
  CHECK(boco::deterministic_solve_count() == 2);
  boco::reset_deterministic_solve_count();
  CHECK(boco::deterministic_solve_count() == 0);
}

}  // namespace

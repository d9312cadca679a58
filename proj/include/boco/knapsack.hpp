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

#ifndef BOCO_KNAPSACK_HPP_
#define BOCO_KNAPSACK_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "boco/types.hpp"

namespace boco {

// Problem constants of the integer knapsack with salvage:
//   max c^T z + q^T [b - A z]^+  s.t.  A z <= b,  z in N^4.
struct KnapsackInstance {
  Vec4 c = Vec4::Constant(12.0);
  Vec3 b = Vec3::Constant(8.0);
  Vec3 q = Vec3::Constant(3.0);

  void validate() const;
};

// Coordinate cap for predicted weight matrices, whose entries can be
// arbitrarily close to zero.
inline constexpr int kPredictedZCap = 64;

// Weighted predicted scenarios and the feasibility target of the chance
// constraint. Weights lie on the simplex.
struct ScenarioSet {
  std::vector<Mat34> matrices;
  std::vector<double> weights;
  double alpha = 0.9;
};

struct Decision {
  IntVec4 z = IntVec4::Zero();
  double objective = 0.0;
};

struct RewardOutcome {
  double reward = 0.0;
  bool feasible = true;
};

// A z <= b with exact comparison.
bool is_feasible(const IntVec4& z, const Mat34& a, const Vec3& b);

// c^T z + q^T [b - A z]^+, ignoring feasibility.
double knapsack_objective(const IntVec4& z, const Mat34& a,
                          const KnapsackInstance& inst);

// Realized reward: the objective when A z <= b, zero otherwise.
RewardOutcome evaluate_reward(const IntVec4& z, const Mat34& a,
                              const KnapsackInstance& inst);

// Exact maximizer over {0 <= z_i <= z_cap, A z <= b}; ties go to the
// lexicographically smallest z. Entries of `a` may have any sign.
Decision solve_deterministic(const Mat34& a, const KnapsackInstance& inst,
                             int z_cap = kPredictedZCap);

// Exact maximizer of sum_i w_i 1[A_i z <= b] (c^T z + q^T [b - A_i z]^+)
// subject to sum_i w_i 1[A_i z <= b] >= alpha - 1e-12 over the capped
// lattice. z = 0 always satisfies the constraint when every b_j >= 0.
Decision solve_chance(const ScenarioSet& scenarios,
                      const KnapsackInstance& inst,
                      int z_cap = kPredictedZCap);

// Weight mass of the scenarios under which z is feasible.
double feasible_mass(const IntVec4& z, const ScenarioSet& scenarios,
                     const Vec3& b);

// Best achievable reward once the weights are revealed. With every entry
// >= 1 the lattice is capped at floor(max_j b_j); otherwise kPredictedZCap.
Decision hindsight_optimum(const Mat34& a_true, const KnapsackInstance& inst);

// Reward-form regret: hindsight reward minus realized reward.
double regret(const IntVec4& z, const Mat34& a_true,
              const KnapsackInstance& inst);
double regret(const IntVec4& z, const Mat34& a_true,
              const KnapsackInstance& inst, double hindsight_value);

// Per-thread count of solve_deterministic calls, for compute accounting.
std::uint64_t deterministic_solve_count();
void reset_deterministic_solve_count();

}  // namespace boco

#endif  // BOCO_KNAPSACK_HPP_

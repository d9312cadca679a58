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

#include "boco/knapsack.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace boco {

namespace {

thread_local std::uint64_t g_deterministic_solves = 0;

constexpr double kChanceSlack = 1e-12;

double bound_margin(double x) { return 1e-9 * (1.0 + std::abs(x)); }

bool lex_less(const IntVec4& a, const IntVec4& b) {
  for (int i = 0; i < 4; ++i) {
    if (a(i) != b(i)) return a(i) < b(i);
  }
  return false;
}

// Per-scenario quantities that do not depend on the search position.
struct ScenarioData {
  const Mat34* a = nullptr;
  double weight = 0.0;
  // c_m - sum_j q_j A(j, m): marginal objective of item m while feasible.
  Vec4 profit;
  // Sum over items m >= d of min(0, A(j, m)) * cap, for d = 0..4.
  Eigen::Matrix<double, 3, 5> negative_tail;
};

// Depth-first enumeration of the capped lattice in lexicographic order. A
// subtree is skipped when no scenario mix inside it can meet the chance
// constraint or when its objective upper bound is below the incumbent.
class LatticeSearch {
 public:
  LatticeSearch(std::span<const Mat34> matrices,
                std::span<const double> weights, double alpha,
                const KnapsackInstance& inst, int z_cap)
      : inst_(inst), alpha_(alpha), cap_(z_cap) {
    scenarios_.reserve(matrices.size());
    for (std::size_t i = 0; i < matrices.size(); ++i) {
      ScenarioData s;
      s.a = &matrices[i];
      s.weight = weights[i];
      for (int m = 0; m < 4; ++m) {
        double used = 0.0;
        for (int j = 0; j < 3; ++j) used += inst.q(j) * matrices[i](j, m);
        s.profit(m) = inst.c(m) - used;
      }
      for (int j = 0; j < 3; ++j) {
        s.negative_tail(j, 4) = 0.0;
        for (int d = 3; d >= 0; --d) {
          s.negative_tail(j, d) =
              s.negative_tail(j, d + 1) +
              std::min(0.0, matrices[i](j, d)) * static_cast<double>(cap_);
        }
      }
      scenarios_.push_back(s);
    }
    partial_use_.assign(scenarios_.size(), Vec3::Zero());
    partial_profit_.assign(scenarios_.size(), 0.0);
    possible_.assign(scenarios_.size(), 1);
  }

  Decision run() {
    best_z_ = IntVec4::Zero();
    best_value_ = evaluate(best_z_, &best_ok_);
    seed_greedy();
    z_.setZero();
    descend(0);
    if (!best_ok_) {
      throw NumericError("knapsack: no decision satisfies the constraints");
    }
    return Decision{best_z_, best_value_};
  }

 private:
  // Objective at a full lattice point, evaluated in the same order as
  // knapsack_objective so deterministic results match it bit for bit.
  double evaluate(const IntVec4& z, bool* ok) const {
    double value = 0.0;
    double mass = 0.0;
    for (const ScenarioData& s : scenarios_) {
      if (!is_feasible(z, *s.a, inst_.b)) continue;
      mass += s.weight;
      value += s.weight * knapsack_objective(z, *s.a, inst_);
    }
    *ok = mass >= alpha_ - kChanceSlack;
    return value;
  }

  void offer(const IntVec4& z) {
    bool ok = false;
    const double value = evaluate(z, &ok);
    if (!ok) return;
    if (!best_ok_ || value > best_value_ ||
        (value == best_value_ && lex_less(z, best_z_))) {
      best_value_ = value;
      best_z_ = z;
      best_ok_ = true;
    }
  }

  // Coordinate ascent from z = 0 to get a strong incumbent early.
  void seed_greedy() {
    IntVec4 z = IntVec4::Zero();
    for (int iter = 0; iter < 4 * cap_ + 4; ++iter) {
      IntVec4 step_best = z;
      bool improved = false;
      double current = 0.0;
      bool ok = false;
      current = evaluate(z, &ok);
      for (int m = 0; m < 4; ++m) {
        if (z(m) >= cap_) continue;
        IntVec4 trial = z;
        ++trial(m);
        bool trial_ok = false;
        const double v = evaluate(trial, &trial_ok);
        if (trial_ok && v > current) {
          current = v;
          step_best = trial;
          improved = true;
        }
      }
      if (!improved) break;
      z = step_best;
      offer(z);
    }
  }

  void descend(int d) {
    if (d == 4) {
      offer(z_);
      return;
    }
    const std::size_t n = scenarios_.size();
    std::vector<Vec3> saved_use(partial_use_);
    std::vector<double> saved_profit(partial_profit_);

    for (int v = 0; v <= cap_; ++v) {
      z_(d) = v;
      double possible_mass = 0.0;
      double upper = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const ScenarioData& s = scenarios_[i];
        Vec3 use = saved_use[i] + s.a->col(d) * static_cast<double>(v);
        partial_use_[i] = use;
        partial_profit_[i] = saved_profit[i] + s.profit(d) * v;
        bool possible = true;
        Vec3 lower;
        for (int j = 0; j < 3; ++j) {
          lower(j) = use(j) + s.negative_tail(j, d + 1);
          if (lower(j) > inst_.b(j) + bound_margin(inst_.b(j))) {
            possible = false;
          }
        }
        possible_[i] = possible;
        if (!possible) continue;
        possible_mass += s.weight;
        upper += s.weight * scenario_upper_bound(s, i, d + 1, lower);
      }
      if (possible_mass < alpha_ - 2.0 * kChanceSlack) {
        if (all_impossible_monotone(d)) break;
        continue;
      }
      if (best_ok_ && upper < best_value_ - bound_margin(best_value_)) {
        continue;
      }
      descend(d + 1);
    }
    partial_use_ = std::move(saved_use);
    partial_profit_ = std::move(saved_profit);
    z_(d) = 0;
  }

  // True when every currently impossible scenario is impossible through a row
  // whose entry in column d is nonnegative, so larger z_d cannot revive it.
  bool all_impossible_monotone(int d) const {
    for (std::size_t i = 0; i < scenarios_.size(); ++i) {
      if (possible_[i]) continue;
      const ScenarioData& s = scenarios_[i];
      bool monotone = false;
      for (int j = 0; j < 3; ++j) {
        const double lower = partial_use_[i](j) + s.negative_tail(j, d + 1);
        if (lower > inst_.b(j) + bound_margin(inst_.b(j)) &&
            (*s.a)(j, d) >= 0.0) {
          monotone = true;
          break;
        }
      }
      if (!monotone) return false;
    }
    return true;
  }

  // Upper bound on scenario i's objective over completions of the prefix
  // z_0..z_{first_free-1}, given the lower bounds on row consumption.
  double scenario_upper_bound(const ScenarioData& s, std::size_t i,
                              int first_free, const Vec3& lower) const {
    double bound = inst_.q.dot(inst_.b) + partial_profit_[i];
    for (int m = first_free; m < 4; ++m) {
      if (s.profit(m) <= 0.0) continue;
      double amount = cap_;
      for (int j = 0; j < 3; ++j) {
        const double a = (*s.a)(j, m);
        if (a <= 0.0) continue;
        const double room = inst_.b(j) - lower(j) + bound_margin(inst_.b(j));
        amount = std::min(amount, std::floor(std::max(0.0, room) / a));
      }
      bound += s.profit(m) * amount;
    }
    return std::max(bound, 0.0);
  }

  const KnapsackInstance& inst_;
  double alpha_;
  int cap_;
  std::vector<ScenarioData> scenarios_;
  std::vector<Vec3> partial_use_;
  std::vector<double> partial_profit_;
  std::vector<char> possible_;
  IntVec4 z_ = IntVec4::Zero();
  IntVec4 best_z_ = IntVec4::Zero();
  double best_value_ = 0.0;
  bool best_ok_ = false;
};

void check_cap(int z_cap) {
  if (z_cap < 0) throw ArgumentError("z_cap must be >= 0");
}

}  // namespace

void KnapsackInstance::validate() const {
  if ((c.array() < 0.0).any()) throw ArgumentError("c must be >= 0");
  if ((q.array() < 0.0).any()) throw ArgumentError("q must be >= 0");
  if ((b.array() <= 0.0).any()) throw ArgumentError("b must be > 0");
}

bool is_feasible(const IntVec4& z, const Mat34& a, const Vec3& b) {
  for (int j = 0; j < 3; ++j) {
    double used = 0.0;
    for (int i = 0; i < 4; ++i) used += a(j, i) * z(i);
    if (!(used <= b(j))) return false;
  }
  return true;
}

double knapsack_objective(const IntVec4& z, const Mat34& a,
                          const KnapsackInstance& inst) {
  double value = 0.0;
  for (int i = 0; i < 4; ++i) value += inst.c(i) * z(i);
  for (int j = 0; j < 3; ++j) {
    double used = 0.0;
    for (int i = 0; i < 4; ++i) used += a(j, i) * z(i);
    value += inst.q(j) * std::max(0.0, inst.b(j) - used);
  }
  return value;
}

RewardOutcome evaluate_reward(const IntVec4& z, const Mat34& a,
                              const KnapsackInstance& inst) {
  if (!is_feasible(z, a, inst.b)) return {0.0, false};
  return {knapsack_objective(z, a, inst), true};
}

Decision solve_deterministic(const Mat34& a, const KnapsackInstance& inst,
                             int z_cap) {
  check_cap(z_cap);
  inst.validate();
  ++g_deterministic_solves;
  const double one = 1.0;
  LatticeSearch search(std::span<const Mat34>(&a, 1),
                       std::span<const double>(&one, 1), 1.0, inst, z_cap);
  return search.run();
}

Decision solve_chance(const ScenarioSet& scenarios,
                      const KnapsackInstance& inst, int z_cap) {
  check_cap(z_cap);
  inst.validate();
  if (scenarios.matrices.empty()) {
    throw ArgumentError("solve_chance: empty scenario set");
  }
  if (scenarios.matrices.size() != scenarios.weights.size()) {
    throw ArgumentError("solve_chance: matrices/weights size mismatch");
  }
  LatticeSearch search(scenarios.matrices, scenarios.weights,
                       scenarios.alpha, inst, z_cap);
  return search.run();
}

double feasible_mass(const IntVec4& z, const ScenarioSet& scenarios,
                     const Vec3& b) {
  double mass = 0.0;
  for (std::size_t i = 0; i < scenarios.matrices.size(); ++i) {
    if (is_feasible(z, scenarios.matrices[i], b)) mass += scenarios.weights[i];
  }
  return mass;
}

Decision hindsight_optimum(const Mat34& a_true, const KnapsackInstance& inst) {
  inst.validate();
  const int cap = a_true.minCoeff() >= 1.0
                      ? static_cast<int>(std::floor(inst.b.maxCoeff()))
                      : kPredictedZCap;
  const double one = 1.0;
  LatticeSearch search(std::span<const Mat34>(&a_true, 1),
                       std::span<const double>(&one, 1), 1.0, inst, cap);
  return search.run();
}

double regret(const IntVec4& z, const Mat34& a_true,
              const KnapsackInstance& inst) {
  return regret(z, a_true, inst, hindsight_optimum(a_true, inst).objective);
}

double regret(const IntVec4& z, const Mat34& a_true,
              const KnapsackInstance& inst, double hindsight_value) {
  return hindsight_value - evaluate_reward(z, a_true, inst).reward;
}

std::uint64_t deterministic_solve_count() { return g_deterministic_solves; }
void reset_deterministic_solve_count() { g_deterministic_solves = 0; }

}  // namespace boco

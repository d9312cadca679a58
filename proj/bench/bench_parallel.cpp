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

// Serial reference versus OpenMP paths for the two parallel kernels.

#include <benchmark/benchmark.h>

#include "boco/harness.hpp"
#include "boco/smc.hpp"

namespace {

boco::ExecPolicy policy_of(const benchmark::State& state) {
  return state.range(0) == 0 ? boco::ExecPolicy::kSerial
                             : boco::ExecPolicy::kParallel;
}

void BM_ParticleLosses(benchmark::State& state) {
  boco::SmcConfig cfg;
  cfg.n = static_cast<int>(state.range(1));
  const auto cloud = boco::init_cloud(cfg, 1);
  const auto datum = boco::generate_stream(boco::ArmaConfig::defaults(), 2, 1)[0];
  const boco::KnapsackInstance inst;
  const double hs = boco::hindsight_optimum(datum.a, inst).objective;
  const boco::ThetaLoss loss = [&](const boco::ThetaVec& t) {
    const auto d = boco::solve_deterministic(boco::predict(t, datum.x), inst);
    return boco::regret(d.z, datum.a, inst, hs);
  };
  const auto policy = policy_of(state);
  for (auto _ : state) {
    benchmark::DoNotOptimize(boco::evaluate_losses(cloud.thetas, loss, policy));
  }
  state.SetLabel(policy == boco::ExecPolicy::kSerial ? "serial" : "openmp");
}
BENCHMARK(BM_ParticleLosses)->ArgsProduct({{0, 1}, {20, 200}});

void BM_Trials(benchmark::State& state) {
  boco::ExperimentConfig cfg;
  cfg.framework = boco::Framework::kBma;
  cfg.trials = 8;
  cfg.horizon = static_cast<int>(state.range(1));
  cfg.trial_policy = policy_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(boco::run_trials(cfg));
  state.SetLabel(cfg.trial_policy == boco::ExecPolicy::kSerial ? "serial"
                                                               : "openmp");
}
BENCHMARK(BM_Trials)->ArgsProduct({{0, 1}, {100}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

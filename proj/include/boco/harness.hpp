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

#ifndef BOCO_HARNESS_HPP_
#define BOCO_HARNESS_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "boco/arma.hpp"
#include "boco/baselines.hpp"
#include "boco/knapsack.hpp"
#include "boco/parallel.hpp"
#include "boco/smc.hpp"

namespace boco {

enum class Framework { kBma, kBgs, kPto, kDfl };

std::string_view framework_name(Framework f);  // "bma", "bgs", "pto", "dfl"
Framework parse_framework(std::string_view name);

// Upper bound on any realized reward for the default instance when every true
// weight is >= 1: at most 8 units fit, each adding at most 12 - 3*3 = 3 over
// the pure-salvage value 72.
inline constexpr double kDefaultLossBound = 96.0;

struct ExperimentConfig {
  Framework framework = Framework::kBma;
  int horizon = 1000;
  int trials = 100;
  std::uint64_t base_seed = 0;
  double alpha = 0.9;
  SmcConfig smc;
  double adam_lr0 = 0.1;
  double adam_decay = 0.99;
  // Stages per learning-rate decay step; 0 means one epoch, i.e. the whole
  // horizon, so a single online pass runs at adam_lr0 throughout.
  int adam_decay_interval = 0;
  int score_k = 20;
  int z_cap = kPredictedZCap;
  KnapsackInstance instance;
  ArmaConfig arma = ArmaConfig::defaults();
  int burn_in = 0;
  std::string out_path = "out";
  ExecPolicy trial_policy = ExecPolicy::kParallel;
  ExecPolicy particle_policy = ExecPolicy::kSerial;

  void validate() const;
};

// Applies `key = value` lines ('#' starts a comment). Unknown keys throw
// ArgumentError.
void apply_config_text(std::string_view text, ExperimentConfig& config);
void apply_config_file(const std::filesystem::path& path,
                       ExperimentConfig& config);

struct StageRecord {
  int trial = 0;
  int t = 0;
  Framework framework = Framework::kBma;
  IntVec4 z = IntVec4::Zero();
  double reward = 0.0;
  bool feasible = true;
  double hindsight = 0.0;
  double regret = 0.0;
  std::optional<double> ess;         // SMC frameworks only
  std::optional<bool> rejuvenated;   // SMC frameworks only
};

// Shared per-stage inputs: the datum and its hindsight optimum value.
struct StageInput {
  const StageDatum& datum;
  double hindsight = 0.0;
};

// BMA: chance-constrained decision on the weighted particle predictions, then
// Gibbs reweighting by per-particle regret and Liu-West rejuvenation when
// ESS <= tau * N.
StageRecord run_stage_bma(ParticleCloud& cloud, const StageInput& in,
                          const ExperimentConfig& config);

// BGS: decision from one particle drawn by its weight; same posterior update.
StageRecord run_stage_bgs(ParticleCloud& cloud, RandomStream& selector,
                          const StageInput& in, const ExperimentConfig& config);

// PtO: plug-in decision, then one Adam step on the Frobenius prediction loss.
StageRecord run_stage_pto(ThetaVec& theta, AdamState& adam,
                          const StageInput& in, const ExperimentConfig& config);

// DFL: plug-in decision, then one Adam step along the score-function regret
// gradient (K perturbed solves).
StageRecord run_stage_dfl(ThetaVec& theta, AdamState& adam,
                          RandomStream& perturbations, const StageInput& in,
                          const ExperimentConfig& config);

// Stream seeds are derive_seed(base_seed, trial_index, tag); every framework
// sees the same data for a given trial index.
std::vector<StageRecord> run_trial(const ExperimentConfig& config,
                                   int trial_index);

struct Band {
  std::vector<double> mean;
  std::vector<double> p10;
  std::vector<double> p90;
};

struct Statistic {
  std::vector<double> per_trial;
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
};

struct SummaryStats {
  Framework framework = Framework::kBma;
  int trials = 0;
  int horizon = 0;
  Statistic reward_full;
  Statistic reward_half;  // stages t >= T/2
  Statistic feas_full;
  Statistic feas_half;
  Statistic regret_first_half;  // stages t < T/2
  Statistic regret_second_half;
  Band reward_curve;  // time-averaged cumulative reward
  Band feas_curve;
};

// Inclusive linear-interpolation percentile, p in [0, 1].
double percentile(std::vector<double> values, double p);

// `trials` holds one record vector per trial; all must have equal length.
SummaryStats summarize(const std::vector<std::vector<StageRecord>>& trials);

struct ExperimentResult {
  std::vector<std::vector<StageRecord>> trials;
  SummaryStats summary;
};

// Runs every trial without touching the filesystem.
ExperimentResult run_trials(const ExperimentConfig& config);

// Runs every trial, writes stages_<fw>.csv into config.out_path and then
// refreshes the directory report (see write_report). The directory is created
// and probed for writability before any compute.
ExperimentResult run_experiment(const ExperimentConfig& config);

// Summarizes every stages_<fw>.csv in `dir`: writes summary.csv (one row per
// framework) plus curve_reward_<fw>.csv and curve_feas_<fw>.csv. Returns the
// summaries in bma, bgs, pto, dfl order.
std::vector<SummaryStats> write_report(const std::filesystem::path& dir);

void write_stage_csv(std::ostream& out,
                     const std::vector<std::vector<StageRecord>>& trials);
std::vector<std::vector<StageRecord>> read_stage_csv(std::istream& in);
void write_summary_header(std::ostream& out);
void write_summary_row(std::ostream& out, const SummaryStats& s);
void write_curve_csv(std::ostream& out, const Band& band);

}  // namespace boco

#endif  // BOCO_HARNESS_HPP_

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

// Command-line front end: run experiments, generate data streams, and rebuild
// reports from stage CSVs.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "boco/arma.hpp"
#include "boco/harness.hpp"
#include "boco/smc.hpp"

namespace {

constexpr int kExitNumeric = 1;
constexpr int kExitUsage = 2;

void print_summary(const boco::SummaryStats& s) {
  std::cout << boco::framework_name(s.framework) << ": trials=" << s.trials
            << " T=" << s.horizon << " r_T=" << s.reward_full.mean << " +- "
            << s.reward_full.std << " r_half=" << s.reward_half.mean << " +- "
            << s.reward_half.std << " feas_T=" << s.feas_full.mean << " +- "
            << s.feas_full.std << " feas_half=" << s.feas_half.mean << " +- "
            << s.feas_half.std << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian online contextual optimization benchmark"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "run one framework over many trials");
  std::string framework = "bma";
  std::optional<int> trials, horizon;
  std::optional<long long> seed;
  std::string config_path;
  std::optional<std::string> out_dir;
  bool serial = false;
  run->add_option("--framework", framework, "bma|bgs|pto|dfl")
      ->check(CLI::IsMember({"bma", "bgs", "pto", "dfl"}, CLI::ignore_case));
  run->add_option("--trials", trials, "number of trials");
  run->add_option("--horizon", horizon, "stages per trial");
  run->add_option("--seed", seed, "base seed");
  run->add_option("--config", config_path, "key = value config file")
      ->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "output directory");
  run->add_flag("--serial", serial, "run trials serially");

  auto* gen = app.add_subcommand("generate", "write a data stream as CSV");
  long long gen_seed = 0;
  int gen_horizon = 1000;
  int burn_in = 0;
  std::string gen_out;
  gen->add_option("--seed", gen_seed, "stream seed");
  gen->add_option("--horizon", gen_horizon, "number of stages");
  gen->add_option("--burn-in", burn_in, "discarded leading stages");
  gen->add_option("--out", gen_out, "CSV file")->required();

  auto* report = app.add_subcommand("report", "summarize stage CSVs");
  std::string report_dir;
  report->add_option("--in", report_dir, "directory with stages_*.csv")
      ->required()
      ->check(CLI::ExistingDirectory);

  auto* mix = app.add_subcommand(
      "mixability", "check the mixability inequality along one BMA trial");
  long long mix_seed = 0;
  int mix_horizon = 100;
  mix->add_option("--seed", mix_seed, "base seed");
  mix->add_option("--horizon", mix_horizon, "stages");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*run) {
      boco::ExperimentConfig config;
      if (!config_path.empty()) boco::apply_config_file(config_path, config);
      if (run->count("--framework") > 0) {
        config.framework = boco::parse_framework(framework);
      }
      if (trials) config.trials = *trials;
      if (horizon) config.horizon = *horizon;
      if (seed) config.base_seed = static_cast<std::uint64_t>(*seed);
      if (out_dir) config.out_path = *out_dir;
      if (serial) config.trial_policy = boco::ExecPolicy::kSerial;
      const boco::ExperimentResult result = boco::run_experiment(config);
      print_summary(result.summary);
    } else if (*gen) {
      const auto stream = boco::generate_stream(
          boco::ArmaConfig::defaults(), static_cast<std::uint64_t>(gen_seed),
          gen_horizon, burn_in);
      std::ofstream out(gen_out);
      if (!out) throw std::runtime_error("cannot write " + gen_out);
      boco::write_stream_csv(out, stream);
    } else if (*report) {
      for (const auto& s : boco::write_report(report_dir)) print_summary(s);
    } else if (*mix) {
      boco::ExperimentConfig config;
      config.base_seed = static_cast<std::uint64_t>(mix_seed);
      const auto stream = boco::generate_stream(
          config.arma,
          boco::derive_seed(config.base_seed, 0, boco::StreamTag::kData),
          mix_horizon);
      boco::ParticleCloud cloud = boco::init_cloud(
          config.smc,
          boco::derive_seed(config.base_seed, 0, boco::StreamTag::kPrior));
      int mixable = 0, convex = 0;
      for (const auto& datum : stream) {
        const auto r = boco::mixability_check(cloud, datum, config.instance,
                                              config.smc.lambda, config.alpha);
        mixable += r.holds_mixable;
        convex += r.holds_convex_relax;
        const double hs =
            boco::hindsight_optimum(datum.a, config.instance).objective;
        boco::run_stage_bma(cloud, boco::StageInput{datum, hs}, config);
      }
      std::cout << "stages=" << stream.size() << " mixable=" << mixable
                << " convex_relax=" << convex << '\n';
    }
  } catch (const boco::ArgumentError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return 0;
}

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

#include "boco/harness.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "boco/io.hpp"

namespace boco {

namespace {

std::string trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return std::string(s.substr(begin, end - begin + 1));
}

template <int N>
Eigen::Matrix<double, N, 1> parse_vector(const std::string& key,
                                         const std::string& value) {
  const std::vector<std::string> parts = split_csv_line(value);
  if (static_cast<int>(parts.size()) != N) {
    throw ArgumentError("config: '" + key + "' needs " + std::to_string(N) +
                        " comma-separated values");
  }
  Eigen::Matrix<double, N, 1> out;
  for (int i = 0; i < N; ++i) out(i) = parse_double(trim(parts[i]));
  return out;
}

int parse_int32(const std::string& value) {
  return static_cast<int>(parse_int(value));
}

StageRecord base_record(const StageInput& in, Framework f, const IntVec4& z,
                        const KnapsackInstance& inst) {
  StageRecord rec;
  rec.t = in.datum.t;
  rec.framework = f;
  rec.z = z;
  const RewardOutcome outcome = evaluate_reward(z, in.datum.a, inst);
  rec.reward = outcome.reward;
  rec.feasible = outcome.feasible;
  rec.hindsight = in.hindsight;
  rec.regret = in.hindsight - outcome.reward;
  return rec;
}

std::vector<Mat34> particle_predictions(const ParticleCloud& cloud,
                                        const Vec3& x) {
  std::vector<Mat34> out;
  out.reserve(cloud.size());
  for (const ThetaVec& theta : cloud.thetas) out.push_back(predict(theta, x));
  return out;
}

// Regret of the plug-in decision of one parameter vector on this stage.
ThetaLoss stage_loss(const StageInput& in, const ExperimentConfig& config) {
  return [&in, &config](const ThetaVec& theta) {
    const Decision d = solve_deterministic(predict(theta, in.datum.x),
                                           config.instance, config.z_cap);
    return regret(d.z, in.datum.a, config.instance, in.hindsight);
  };
}

// Gibbs update shared by BMA and BGS. Returns (ess, rejuvenated).
std::pair<double, bool> update_posterior(ParticleCloud& cloud,
                                         const StageInput& in,
                                         const ExperimentConfig& config) {
  const ThetaLoss loss = stage_loss(in, config);
  const std::vector<double> losses =
      evaluate_losses(cloud.thetas, loss, config.particle_policy);
  reweight(cloud, losses, config.smc.lambda);
  const double e = ess(cloud.weights);
  if (e > config.smc.tau * static_cast<double>(config.smc.n)) {
    return {e, false};
  }
  const LiuWestKernel kernel =
      liu_west_params(cloud, config.smc.a, config.smc.jitter_floor);
  mh_rejuvenate(cloud, kernel, loss, config.smc, losses,
                config.particle_policy);
  return {e, true};
}

void descend(ThetaVec& theta, AdamState& adam, const Vec48& grad) {
  auto [delta, next] = adam_step(adam, grad);
  theta.values += delta;
  adam = next;
}

Statistic make_statistic(std::vector<double> per_trial) {
  Statistic s;
  s.per_trial = std::move(per_trial);
  if (s.per_trial.empty()) return s;
  double sum = 0.0;
  for (double v : s.per_trial) sum += v;
  s.mean = sum / static_cast<double>(s.per_trial.size());
  double ss = 0.0;
  for (double v : s.per_trial) ss += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(ss / static_cast<double>(s.per_trial.size()));
  return s;
}

double mean_over(const std::vector<double>& v, std::size_t begin,
                 std::size_t end) {
  if (end <= begin) return 0.0;
  double sum = 0.0;
  for (std::size_t i = begin; i < end; ++i) sum += v[i];
  return sum / static_cast<double>(end - begin);
}

// Running mean (1/(t+1)) sum_{s<=t} v_s, summed left to right so the last
// entry equals mean_over(v, 0, T) exactly.
std::vector<double> running_mean(const std::vector<double>& v) {
  std::vector<double> out(v.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    sum += v[i];
    out[i] = sum / static_cast<double>(i + 1);
  }
  return out;
}

Band make_band(const std::vector<std::vector<double>>& curves) {
  Band band;
  if (curves.empty()) return band;
  const std::size_t horizon = curves.front().size();
  for (std::size_t t = 0; t < horizon; ++t) {
    std::vector<double> column;
    column.reserve(curves.size());
    for (const auto& c : curves) column.push_back(c[t]);
    band.mean.push_back(make_statistic(column).mean);
    band.p10.push_back(percentile(column, 0.10));
    band.p90.push_back(percentile(column, 0.90));
  }
  return band;
}

std::filesystem::path stage_file(const std::filesystem::path& dir,
                                 Framework f) {
  return dir / ("stages_" + std::string(framework_name(f)) + ".csv");
}

}  // namespace

std::string_view framework_name(Framework f) {
  switch (f) {
    case Framework::kBma: return "bma";
    case Framework::kBgs: return "bgs";
    case Framework::kPto: return "pto";
    case Framework::kDfl: return "dfl";
  }
  return "unknown";
}

Framework parse_framework(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char ch) { return std::tolower(ch); });
  if (lower == "bma") return Framework::kBma;
  if (lower == "bgs") return Framework::kBgs;
  if (lower == "pto") return Framework::kPto;
  if (lower == "dfl") return Framework::kDfl;
  throw ArgumentError("unknown framework '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
  if (horizon < 0) throw ArgumentError("horizon must be >= 0");
  if (trials < 1) throw ArgumentError("trials must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ArgumentError("alpha must be in (0, 1)");
  }
  if (score_k < 1) throw ArgumentError("score_k must be >= 1");
  if (z_cap < 1) throw ArgumentError("z_cap must be >= 1");
  if (burn_in < 0) throw ArgumentError("burn_in must be >= 0");
  if (adam_decay_interval < 0) {
    throw ArgumentError("adam_decay_interval must be >= 0");
  }
  smc.validate();
  instance.validate();
  arma.validate();
}

void apply_config_text(std::string_view text, ExperimentConfig& config) {
  std::istringstream lines{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(lines, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    if (hash != std::string::npos) raw.resize(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ArgumentError("config line " + std::to_string(line_no) +
                          ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "framework") config.framework = parse_framework(value);
    else if (key == "horizon" || key == "T") config.horizon = parse_int32(value);
    else if (key == "trials") config.trials = parse_int32(value);
    else if (key == "seed" || key == "base_seed")
      config.base_seed = static_cast<std::uint64_t>(parse_int(value));
    else if (key == "alpha") config.alpha = parse_double(value);
    else if (key == "n" || key == "particles") config.smc.n = parse_int32(value);
    else if (key == "lambda") config.smc.lambda = parse_double(value);
    else if (key == "a" || key == "shrinkage") config.smc.a = parse_double(value);
    else if (key == "tau") config.smc.tau = parse_double(value);
    else if (key == "L" || key == "mh_steps") config.smc.mh_steps = parse_int32(value);
    else if (key == "prior_std") config.smc.prior_std = parse_double(value);
    else if (key == "jitter_floor") config.smc.jitter_floor = parse_double(value);
    else if (key == "adam_lr0") config.adam_lr0 = parse_double(value);
    else if (key == "adam_decay") config.adam_decay = parse_double(value);
    else if (key == "adam_decay_interval")
      config.adam_decay_interval = parse_int32(value);
    else if (key == "score_k" || key == "K") config.score_k = parse_int32(value);
    else if (key == "z_cap") config.z_cap = parse_int32(value);
    else if (key == "c") config.instance.c = parse_vector<4>(key, value);
    else if (key == "b") config.instance.b = parse_vector<3>(key, value);
    else if (key == "q") config.instance.q = parse_vector<3>(key, value);
    else if (key == "arma_shift") config.arma.shift = parse_double(value);
    else if (key == "arma_scale") config.arma.scale = parse_double(value);
    else if (key == "arma_clip_floor") config.arma.clip_floor = parse_double(value);
    else if (key == "burn_in") config.burn_in = parse_int32(value);
    else if (key == "out") config.out_path = value;
    else if (key == "parallel") {
      config.trial_policy =
          parse_int(value) != 0 ? ExecPolicy::kParallel : ExecPolicy::kSerial;
    } else {
      throw ArgumentError("config line " + std::to_string(line_no) +
                          ": unknown key '" + key + "'");
    }
  }
}

void apply_config_file(const std::filesystem::path& path,
                       ExperimentConfig& config) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot read config " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  apply_config_text(buffer.str(), config);
}

StageRecord run_stage_bma(ParticleCloud& cloud, const StageInput& in,
                          const ExperimentConfig& config) {
  ScenarioSet scenarios;
  scenarios.matrices = particle_predictions(cloud, in.datum.x);
  scenarios.weights = cloud.weights;
  scenarios.alpha = config.alpha;
  const Decision decision =
      solve_chance(scenarios, config.instance, config.z_cap);

  StageRecord rec =
      base_record(in, Framework::kBma, decision.z, config.instance);
  const auto [e, rejuvenated] = update_posterior(cloud, in, config);
  rec.ess = e;
  rec.rejuvenated = rejuvenated;
  return rec;
}

StageRecord run_stage_bgs(ParticleCloud& cloud, RandomStream& selector,
                          const StageInput& in,
                          const ExperimentConfig& config) {
  const std::size_t pick = bgs_select(cloud, selector);
  const Decision decision =
      solve_deterministic(predict(cloud.thetas[pick], in.datum.x),
                          config.instance, config.z_cap);
  StageRecord rec =
      base_record(in, Framework::kBgs, decision.z, config.instance);
  const auto [e, rejuvenated] = update_posterior(cloud, in, config);
  rec.ess = e;
  rec.rejuvenated = rejuvenated;
  return rec;
}

StageRecord run_stage_pto(ThetaVec& theta, AdamState& adam,
                          const StageInput& in,
                          const ExperimentConfig& config) {
  const Decision decision = solve_deterministic(
      predict(theta, in.datum.x), config.instance, config.z_cap);
  StageRecord rec =
      base_record(in, Framework::kPto, decision.z, config.instance);
  descend(theta, adam, mse_loss_grad(theta, in.datum.x, in.datum.a).grad);
  return rec;
}

StageRecord run_stage_dfl(ThetaVec& theta, AdamState& adam,
                          RandomStream& perturbations, const StageInput& in,
                          const ExperimentConfig& config) {
  const Decision decision = solve_deterministic(
      predict(theta, in.datum.x), config.instance, config.z_cap);
  StageRecord rec =
      base_record(in, Framework::kDfl, decision.z, config.instance);
  ScoreGradConfig score;
  score.k = config.score_k;
  descend(theta, adam,
          dfl_param_grad(theta, in.datum.x, in.datum.a, config.instance, score,
                         perturbations, in.hindsight));
  return rec;
}

std::vector<StageRecord> run_trial(const ExperimentConfig& config,
                                   int trial_index) {
  const auto trial = static_cast<std::uint64_t>(trial_index);
  const std::uint64_t seed = config.base_seed;
  ArmaGenerator data(config.arma, derive_seed(seed, trial, StreamTag::kData),
                     config.burn_in);

  ParticleCloud cloud;
  RandomStream selector(derive_seed(seed, trial, StreamTag::kBgs));
  RandomStream perturbations(derive_seed(seed, trial, StreamTag::kDfl));
  ThetaVec theta;
  AdamState adam;
  adam.lr0 = config.adam_lr0;
  adam.decay = config.adam_decay;
  adam.decay_interval = config.adam_decay_interval > 0
                            ? config.adam_decay_interval
                            : std::max(1, config.horizon);

  const bool smc_based = config.framework == Framework::kBma ||
                         config.framework == Framework::kBgs;
  if (smc_based) {
    cloud = init_cloud(config.smc, derive_seed(seed, trial, StreamTag::kPrior));
    cloud.rng = RandomStream(derive_seed(seed, trial, StreamTag::kMh));
  } else {
    RandomStream init(derive_seed(seed, trial, StreamTag::kInit));
    init.fill_normal(theta.values);
  }

  std::vector<StageRecord> records;
  records.reserve(static_cast<std::size_t>(config.horizon));
  for (int t = 0; t < config.horizon; ++t) {
    const StageDatum datum = data.next();
    const StageInput in{datum,
                        hindsight_optimum(datum.a, config.instance).objective};
    StageRecord rec;
    switch (config.framework) {
      case Framework::kBma: rec = run_stage_bma(cloud, in, config); break;
      case Framework::kBgs:
        rec = run_stage_bgs(cloud, selector, in, config);
        break;
      case Framework::kPto: rec = run_stage_pto(theta, adam, in, config); break;
      case Framework::kDfl:
        rec = run_stage_dfl(theta, adam, perturbations, in, config);
        break;
    }
    rec.trial = trial_index;
    records.push_back(rec);
  }
  return records;
}

double percentile(std::vector<double> values, double p) {
  if (values.empty()) throw ArgumentError("percentile of empty sample");
  std::sort(values.begin(), values.end());
  const double pos = p * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

SummaryStats summarize(const std::vector<std::vector<StageRecord>>& trials) {
  SummaryStats s;
  s.trials = static_cast<int>(trials.size());
  if (trials.empty()) return s;
  const std::size_t horizon = trials.front().size();
  s.horizon = static_cast<int>(horizon);
  if (!trials.front().empty()) s.framework = trials.front().front().framework;
  const std::size_t half = horizon / 2;

  std::vector<double> r_full, r_half, f_full, f_half, g_first, g_second;
  std::vector<std::vector<double>> reward_curves, feas_curves;
  for (const auto& records : trials) {
    if (records.size() != horizon) {
      throw ArgumentError("summarize: trials have different horizons");
    }
    std::vector<double> rewards, feas, regrets;
    for (const StageRecord& r : records) {
      rewards.push_back(r.reward);
      feas.push_back(r.feasible ? 1.0 : 0.0);
      regrets.push_back(r.regret);
    }
    r_full.push_back(mean_over(rewards, 0, horizon));
    r_half.push_back(mean_over(rewards, half, horizon));
    f_full.push_back(mean_over(feas, 0, horizon));
    f_half.push_back(mean_over(feas, half, horizon));
    g_first.push_back(mean_over(regrets, 0, half));
    g_second.push_back(mean_over(regrets, half, horizon));
    reward_curves.push_back(running_mean(rewards));
    feas_curves.push_back(running_mean(feas));
  }
  s.reward_full = make_statistic(std::move(r_full));
  s.reward_half = make_statistic(std::move(r_half));
  s.feas_full = make_statistic(std::move(f_full));
  s.feas_half = make_statistic(std::move(f_half));
  s.regret_first_half = make_statistic(std::move(g_first));
  s.regret_second_half = make_statistic(std::move(g_second));
  s.reward_curve = make_band(reward_curves);
  s.feas_curve = make_band(feas_curves);
  return s;
}

ExperimentResult run_trials(const ExperimentConfig& config) {
  config.validate();
  ExperimentResult result;
  result.trials.resize(static_cast<std::size_t>(config.trials));
  ExperimentConfig inner = config;
  if (config.trial_policy == ExecPolicy::kParallel) {
    inner.particle_policy = ExecPolicy::kSerial;
  }
  for_each_index(
      result.trials.size(),
      [&](std::size_t i) {
        result.trials[i] = run_trial(inner, static_cast<int>(i));
      },
      config.trial_policy);
  result.summary = summarize(result.trials);
  result.summary.framework = config.framework;
  return result;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const std::filesystem::path dir(config.out_path);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const std::filesystem::path path = stage_file(dir, config.framework);
  {
    std::ofstream probe(path, std::ios::app);
    if (!probe) {
      throw std::runtime_error("cannot write to " + path.string());
    }
  }
  ExperimentResult result = run_trials(config);
  {
    std::ofstream out(path, std::ios::trunc);
    write_stage_csv(out, result.trials);
    if (!out) throw std::runtime_error("failed writing " + path.string());
  }
  write_report(dir);
  return result;
}

void write_stage_csv(std::ostream& out,
                     const std::vector<std::vector<StageRecord>>& trials) {
  out << "trial,t,framework,z1,z2,z3,z4,reward,feasible,hindsight,regret,ess,"
         "rejuvenated\n";
  for (const auto& records : trials) {
    for (const StageRecord& r : records) {
      out << r.trial << ',' << r.t << ',' << framework_name(r.framework);
      for (int i = 0; i < 4; ++i) out << ',' << r.z(i);
      out << ',' << format_double(r.reward) << ',' << (r.feasible ? 1 : 0)
          << ',' << format_double(r.hindsight) << ','
          << format_double(r.regret) << ',';
      if (r.ess) out << format_double(*r.ess);
      out << ',';
      if (r.rejuvenated) out << (*r.rejuvenated ? 1 : 0);
      out << '\n';
    }
  }
}

std::vector<std::vector<StageRecord>> read_stage_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) return {};
  std::map<int, std::vector<StageRecord>> by_trial;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> f = split_csv_line(line);
    if (f.size() != 13) {
      throw ArgumentError("stage csv line " + std::to_string(line_no) +
                          ": expected 13 fields");
    }
    StageRecord r;
    r.trial = static_cast<int>(parse_int(f[0]));
    r.t = static_cast<int>(parse_int(f[1]));
    r.framework = parse_framework(f[2]);
    for (int i = 0; i < 4; ++i) r.z(i) = static_cast<int>(parse_int(f[3 + i]));
    r.reward = parse_double(f[7]);
    r.feasible = parse_int(f[8]) != 0;
    r.hindsight = parse_double(f[9]);
    r.regret = parse_double(f[10]);
    if (!f[11].empty()) r.ess = parse_double(f[11]);
    if (!f[12].empty()) r.rejuvenated = parse_int(f[12]) != 0;
    by_trial[r.trial].push_back(r);
  }
  std::vector<std::vector<StageRecord>> trials;
  for (auto& [index, records] : by_trial) {
    std::sort(records.begin(), records.end(),
              [](const StageRecord& a, const StageRecord& b) { return a.t < b.t; });
    trials.push_back(std::move(records));
  }
  return trials;
}

void write_summary_header(std::ostream& out) {
  out << "framework,trials,T,mean_r_T,std_r_T,mean_r_half,std_r_half,"
         "mean_feas_T,std_feas_T,mean_feas_half,std_feas_half\n";
}

void write_summary_row(std::ostream& out, const SummaryStats& s) {
  out << framework_name(s.framework) << ',' << s.trials << ',' << s.horizon;
  for (const Statistic* st :
       {&s.reward_full, &s.reward_half, &s.feas_full, &s.feas_half}) {
    out << ',' << format_double(st->mean) << ',' << format_double(st->std);
  }
  out << '\n';
}

void write_curve_csv(std::ostream& out, const Band& band) {
  out << "t,mean,p10,p90\n";
  for (std::size_t t = 0; t < band.mean.size(); ++t) {
    out << t << ',' << format_double(band.mean[t]) << ','
        << format_double(band.p10[t]) << ',' << format_double(band.p90[t])
        << '\n';
  }
}

std::vector<SummaryStats> write_report(const std::filesystem::path& dir) {
  std::vector<SummaryStats> summaries;
  for (Framework f : {Framework::kBma, Framework::kBgs, Framework::kPto,
                      Framework::kDfl}) {
    const std::filesystem::path path = stage_file(dir, f);
    if (!std::filesystem::exists(path)) continue;
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    SummaryStats s = summarize(read_stage_csv(in));
    s.framework = f;
    const std::string name(framework_name(f));
    std::ofstream reward(dir / ("curve_reward_" + name + ".csv"));
    write_curve_csv(reward, s.reward_curve);
    std::ofstream feas(dir / ("curve_feas_" + name + ".csv"));
    write_curve_csv(feas, s.feas_curve);
    if (!reward || !feas) {
      throw std::runtime_error("failed writing curves in " + dir.string());
    }
    summaries.push_back(std::move(s));
  }
  std::ofstream out(dir / "summary.csv");
  write_summary_header(out);
  for (const SummaryStats& s : summaries) write_summary_row(out, s);
  if (!out) throw std::runtime_error("failed writing summary in " + dir.string());
  return summaries;
}

}  // namespace boco

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

#include "boco/smc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace boco {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Normalizes log-weights in place (max shift) and refreshes `weights`.
void normalize(std::vector<double>& log_weights, std::vector<double>& weights) {
  const double lse = log_sum_exp(log_weights);
  if (!std::isfinite(lse)) {
    throw NumericError("reweight: all particle weights vanished");
  }
  weights.resize(log_weights.size());
  double total = 0.0;
  for (std::size_t i = 0; i < log_weights.size(); ++i) {
    log_weights[i] -= lse;
    weights[i] = std::exp(log_weights[i]);
    total += weights[i];
  }
  for (double& w : weights) w /= total;
}

}  // namespace

void SmcConfig::validate() const {
  if (n < 1) throw ArgumentError("smc: n must be >= 1");
  if (!(lambda > 0.0)) throw ArgumentError("smc: lambda must be > 0");
  if (!(a > 0.0 && a <= 1.0)) throw ArgumentError("smc: a must be in (0, 1]");
  if (!(tau > 0.0 && tau <= 1.0)) {
    throw ArgumentError("smc: tau must be in (0, 1]");
  }
  if (mh_steps < 0) throw ArgumentError("smc: mh_steps must be >= 0");
  if (!(prior_std > 0.0)) throw ArgumentError("smc: prior_std must be > 0");
  if (!(jitter_floor >= 0.0)) {
    throw ArgumentError("smc: jitter_floor must be >= 0");
  }
}

double log_sum_exp(std::span<const double> values) {
  double peak = kNegInf;
  for (double v : values) peak = std::max(peak, v);
  if (!std::isfinite(peak)) return peak;
  double sum = 0.0;
  for (double v : values) sum += std::exp(v - peak);
  return peak + std::log(sum);
}

void ParticleCloud::set_uniform() {
  const double n = static_cast<double>(thetas.size());
  log_weights.assign(thetas.size(), -std::log(n));
  weights.assign(thetas.size(), 1.0 / n);
}

ParticleCloud init_cloud(const SmcConfig& config, std::uint64_t seed) {
  config.validate();
  ParticleCloud cloud;
  RandomStream prior(seed);
  cloud.thetas.resize(static_cast<std::size_t>(config.n));
  for (ThetaVec& theta : cloud.thetas) {
    prior.fill_normal(theta.values);
    theta.values *= config.prior_std;
  }
  cloud.set_uniform();
  cloud.rng = RandomStream(mix64(seed ^ 0x4d48ULL));
  return cloud;
}

void reweight(ParticleCloud& cloud, std::span<const double> losses,
              double lambda) {
  if (losses.size() != cloud.size()) {
    throw ArgumentError("reweight: losses size mismatch");
  }
  for (std::size_t i = 0; i < losses.size(); ++i) {
    if (!std::isfinite(losses[i])) {
      throw NumericError("reweight: non-finite loss for particle " +
                         std::to_string(i));
    }
    cloud.log_weights[i] -= lambda * losses[i];
  }
  normalize(cloud.log_weights, cloud.weights);
}

double ess(std::span<const double> weights) {
  double sum_sq = 0.0;
  for (double w : weights) sum_sq += w * w;
  return 1.0 / sum_sq;
}

Vec48 LiuWestKernel::sample(RandomStream& rng) const {
  const std::size_t component = rng.categorical(mixture_weights);
  Vec48 z;
  rng.fill_normal(z);
  return means[component] + factor.triangularView<Eigen::Lower>() * z;
}

double LiuWestKernel::log_density(const Vec48& theta) const {
  double log_det_half = 0.0;
  for (int i = 0; i < 48; ++i) log_det_half += std::log(factor(i, i));
  const double norm_const =
      -0.5 * 48.0 * std::log(2.0 * std::numbers::pi) - log_det_half;
  std::vector<double> terms;
  terms.reserve(means.size());
  for (std::size_t i = 0; i < means.size(); ++i) {
    if (mixture_weights[i] <= 0.0) continue;
    const Vec48 r =
        factor.triangularView<Eigen::Lower>().solve(theta - means[i]);
    terms.push_back(std::log(mixture_weights[i]) + norm_const -
                    0.5 * r.squaredNorm());
  }
  return log_sum_exp(terms);
}

LiuWestKernel liu_west_params(const ParticleCloud& cloud, double a,
                              double jitter_floor) {
  LiuWestKernel k;
  const std::size_t n = cloud.size();
  k.mean.setZero();
  for (std::size_t i = 0; i < n; ++i) {
    k.mean += cloud.weights[i] * cloud.thetas[i].values;
  }
  k.covariance.setZero();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec48 d = cloud.thetas[i].values - k.mean;
    k.covariance.noalias() += cloud.weights[i] * (d * d.transpose());
  }
  // Exact symmetry; the rank-one sums can differ in the last bit.
  k.covariance = 0.5 * (k.covariance + k.covariance.transpose()).eval();
  k.means.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    k.means[i] = a * cloud.thetas[i].values + (1.0 - a) * k.mean;
  }
  k.mixture_weights = cloud.weights;

  const Mat48 shrunk = (1.0 - a * a) * k.covariance;
  double jitter = std::max(jitter_floor, 1e-10 * shrunk.trace() / 48.0);
  if (!(jitter > 0.0)) jitter = 1e-12;
  for (int attempt = 0; attempt <= 8; ++attempt) {
    k.h = shrunk + jitter * Mat48::Identity();
    const Eigen::LLT<Mat48> llt(k.h);
    if (llt.info() == Eigen::Success) {
      k.factor = llt.matrixL();
      k.jitter = jitter;
      return k;
    }
    jitter *= 10.0;
  }
  throw NumericError("liu_west_params: kernel covariance not factorizable");
}

double mh_accept_ratio(double loss_proposed, double loss_current,
                       double lambda) {
  return std::exp(lambda * (loss_current - loss_proposed));
}

RejuvenationStats mh_rejuvenate(ParticleCloud& cloud,
                                const LiuWestKernel& kernel,
                                const ThetaLoss& loss, const SmcConfig& config,
                                std::span<const double> current_losses,
                                ExecPolicy policy) {
  const std::size_t n = cloud.size();
  const auto steps = static_cast<std::size_t>(config.mh_steps);
  std::vector<double> current;
  if (current_losses.empty()) {
    current = evaluate_losses(cloud.thetas, loss, policy);
  } else {
    if (current_losses.size() != n) {
      throw ArgumentError("mh_rejuvenate: current_losses size mismatch");
    }
    current.assign(current_losses.begin(), current_losses.end());
  }

  // The proposal does not depend on the chain state, so every draw can be
  // taken up front in the documented order.
  std::vector<ThetaVec> proposals(n * steps);
  std::vector<double> uniforms(n * steps);
  for (std::size_t s = 0; s < n * steps; ++s) {
    proposals[s].values = kernel.sample(cloud.rng);
    uniforms[s] = cloud.rng.uniform01();
  }
  const std::vector<double> proposal_losses =
      evaluate_losses(proposals, loss, policy);

  RejuvenationStats stats;
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(current[i])) {
      throw NumericError("mh_rejuvenate: non-finite loss for particle " +
                         std::to_string(i));
    }
    for (std::size_t k = 0; k < steps; ++k) {
      const std::size_t s = i * steps + k;
      if (!std::isfinite(proposal_losses[s])) {
        throw NumericError("mh_rejuvenate: non-finite proposal loss for particle " +
                           std::to_string(i));
      }
      ++stats.proposals;
      const double r =
          mh_accept_ratio(proposal_losses[s], current[i], config.lambda);
      if (r >= uniforms[s]) {
        cloud.thetas[i] = proposals[s];
        current[i] = proposal_losses[s];
        ++stats.accepted;
      }
    }
  }
  cloud.set_uniform();
  return stats;
}

double full_history_accept_ratio(const ThetaVec& proposed,
                                 const ThetaVec& current,
                                 std::span<const StageDatum> history,
                                 const LogDensity& prior_log_density,
                                 const LogTransition& proposal_log_density,
                                 const StageLoss& loss, double lambda) {
  if (history.empty()) {
    throw ArgumentError("full_history_accept_ratio: empty history");
  }
  const double prior_new = prior_log_density(proposed);
  const double prior_old = prior_log_density(current);
  if (prior_new == kNegInf) return 0.0;
  if (prior_old == kNegInf) return std::numeric_limits<double>::infinity();

  double loss_new = 0.0;
  double loss_old = 0.0;
  for (const StageDatum& d : history) {
    loss_new += loss(proposed, d);
    loss_old += loss(current, d);
  }
  const double log_ratio = prior_new - lambda * loss_new +
                           proposal_log_density(current, proposed) -
                           (prior_old - lambda * loss_old +
                            proposal_log_density(proposed, current));
  return std::exp(log_ratio);
}

double gaussian_prior_log_density(const ThetaVec& theta, double std_dev) {
  const double d = static_cast<double>(ThetaVec::kSize);
  return -0.5 * theta.values.squaredNorm() / (std_dev * std_dev) -
         d * std::log(std_dev) - 0.5 * d * std::log(2.0 * std::numbers::pi);
}

std::vector<double> gibbs_posterior_discrete(std::span<const double> prior,
                                             std::span<const double> losses,
                                             double lambda) {
  if (prior.size() != losses.size()) {
    throw ArgumentError("gibbs_posterior_discrete: size mismatch");
  }
  std::vector<double> log_w(prior.size());
  for (std::size_t k = 0; k < prior.size(); ++k) {
    log_w[k] = prior[k] > 0.0 ? std::log(prior[k]) - lambda * losses[k]
                              : kNegInf;
  }
  std::vector<double> posterior;
  normalize(log_w, posterior);
  return posterior;
}

double free_energy(std::span<const double> pi, std::span<const double> prior,
                   std::span<const double> losses, double lambda) {
  if (pi.size() != prior.size() || pi.size() != losses.size()) {
    throw ArgumentError("free_energy: size mismatch");
  }
  double expected = 0.0;
  double kl = 0.0;
  for (std::size_t k = 0; k < pi.size(); ++k) {
    if (pi[k] <= 0.0) continue;
    if (prior[k] <= 0.0) {
      throw std::domain_error("free_energy: pi not absolutely continuous");
    }
    expected += pi[k] * losses[k];
    kl += pi[k] * std::log(pi[k] / prior[k]);
  }
  return expected + kl / lambda;
}

MixabilityReport mixability_check(const ParticleCloud& cloud,
                                  const StageDatum& datum,
                                  const KnapsackInstance& inst, double lambda,
                                  double alpha, int z_cap) {
  const double hindsight = hindsight_optimum(datum.a, inst).objective;
  ScenarioSet scenarios;
  scenarios.alpha = alpha;
  scenarios.weights = cloud.weights;
  std::vector<double> particle_losses;
  std::vector<double> log_terms;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Mat34 prediction = predict(cloud.thetas[i], datum.x);
    scenarios.matrices.push_back(prediction);
    const Decision d = solve_deterministic(prediction, inst, z_cap);
    particle_losses.push_back(regret(d.z, datum.a, inst, hindsight));
  }

  MixabilityReport report;
  const Decision agg = solve_chance(scenarios, inst, z_cap);
  report.agg_loss = regret(agg.z, datum.a, inst, hindsight);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    report.exp_loss += cloud.weights[i] * particle_losses[i];
    log_terms.push_back(cloud.log_weights[i] - lambda * particle_losses[i]);
  }
  // log_weights are normalized, so this is log E[exp(-lambda l)].
  report.mix_bound = -log_sum_exp(log_terms) / lambda;
  const double tol = 1e-9 * (1.0 + std::abs(report.exp_loss));
  report.holds_mixable = report.agg_loss <= report.mix_bound + tol;
  report.holds_convex_relax = report.agg_loss <= report.exp_loss + tol;
  return report;
}

}  // namespace boco

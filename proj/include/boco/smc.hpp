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

#ifndef BOCO_SMC_HPP_
#define BOCO_SMC_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "boco/arma.hpp"
#include "boco/knapsack.hpp"
#include "boco/parallel.hpp"
#include "boco/predictor.hpp"
#include "boco/random.hpp"

namespace boco {

using Mat48 = Eigen::Matrix<double, 48, 48>;

struct SmcConfig {
  int n = 20;                 // particles
  double lambda = 1e-4;       // temperature of the pseudo-likelihood
  double a = 0.9;             // Liu-West shrinkage
  double tau = 0.5;           // rejuvenate when ESS <= tau * n
  int mh_steps = 3;           // MH steps per particle per rejuvenation
  double prior_std = 1.0;     // prior N(0, prior_std^2 I)
  double jitter_floor = 1e-8; // smallest ridge added to the kernel covariance

  void validate() const;
};

// Weighted particle approximation of the Gibbs posterior. Log-weights are the
// master copy; `weights` is their normalized exponential.
struct ParticleCloud {
  std::vector<ThetaVec> thetas;
  std::vector<double> log_weights;
  std::vector<double> weights;
  RandomStream rng;

  std::size_t size() const { return thetas.size(); }
  void set_uniform();
};

// N i.i.d. prior draws with uniform weights. The cloud's MH stream is seeded
// from mix64(seed ^ 0x4d48).
ParticleCloud init_cloud(const SmcConfig& config, std::uint64_t seed);

// w_i <- w_i exp(-lambda l_i) / sum_j w_j exp(-lambda l_j), in log space.
// Throws NumericError if every weight vanishes or a loss is non-finite.
void reweight(ParticleCloud& cloud, std::span<const double> losses,
              double lambda);

// 1 / sum_i w_i^2.
double ess(std::span<const double> weights);

// Gaussian-mixture proposal sum_i w_i N(m_i, H) fitted to the cloud.
struct LiuWestKernel {
  Vec48 mean;                     // weighted particle mean
  Mat48 covariance;               // weighted particle covariance
  std::vector<Vec48> means;       // a theta_i + (1 - a) mean
  std::vector<double> mixture_weights;
  Mat48 h;                        // (1 - a^2) covariance + jitter I
  Mat48 factor;                   // lower-triangular, factor factor^T = h
  double jitter = 0.0;

  // Draws one proposal in the fixed order: component, then 48 normals.
  Vec48 sample(RandomStream& rng) const;
  double log_density(const Vec48& theta) const;
};

// The ridge starts at max(jitter_floor, 1e-10 trace(H) / 48) and grows by 10x
// on each failed Cholesky factorization, at most 8 times.
LiuWestKernel liu_west_params(const ParticleCloud& cloud, double a,
                              double jitter_floor);

// exp(lambda (loss_current - loss_proposed)).
double mh_accept_ratio(double loss_proposed, double loss_current,
                       double lambda);

struct RejuvenationStats {
  int proposals = 0;
  int accepted = 0;
};

// Independence Metropolis-Hastings moves of every particle under the
// Liu-West proposal, followed by a reset to uniform weights. `current_losses`
// are the stage losses of the current particles; when empty they are
// computed with `loss`. Random draws are consumed in the fixed order
// (particle, step): component, Gaussian vector, uniform. Proposal losses may
// be evaluated concurrently; acceptance is sequential.
RejuvenationStats mh_rejuvenate(ParticleCloud& cloud,
                                const LiuWestKernel& kernel,
                                const ThetaLoss& loss, const SmcConfig& config,
                                std::span<const double> current_losses = {},
                                ExecPolicy policy = ExecPolicy::kSerial);

using LogDensity = std::function<double(const ThetaVec&)>;
// log q(to | from).
using LogTransition = std::function<double(const ThetaVec& to,
                                           const ThetaVec& from)>;
using StageLoss = std::function<double(const ThetaVec&, const StageDatum&)>;

// Exact MH ratio against the full-history Gibbs target
//   pi0(t') e^{-lambda sum l(t', d)} q(t | t') / (pi0(t) e^{-lambda sum l(t, d)} q(t' | t)),
// computed in log space. A zero prior density at the proposal gives 0; at the
// current point only, +infinity.
double full_history_accept_ratio(const ThetaVec& proposed,
                                 const ThetaVec& current,
                                 std::span<const StageDatum> history,
                                 const LogDensity& prior_log_density,
                                 const LogTransition& proposal_log_density,
                                 const StageLoss& loss, double lambda);

// log density of N(0, std^2 I) on R^48.
double gaussian_prior_log_density(const ThetaVec& theta, double std_dev);

// posterior_k proportional to prior_k exp(-lambda loss_k).
std::vector<double> gibbs_posterior_discrete(std::span<const double> prior,
                                             std::span<const double> losses,
                                             double lambda);

// E_pi[loss] + KL(pi || prior) / lambda with 0 log 0 = 0. Throws
// std::domain_error when pi puts mass where the prior has none.
double free_energy(std::span<const double> pi, std::span<const double> prior,
                   std::span<const double> losses, double lambda);

struct MixabilityReport {
  double agg_loss = 0.0;   // regret of the chance-constrained decision
  double exp_loss = 0.0;   // posterior mean of per-particle regrets
  double mix_bound = 0.0;  // -(1/lambda) log E[exp(-lambda l)]
  bool holds_mixable = false;
  bool holds_convex_relax = false;
};

// Evaluates both sides of the mixability inequality and of its convex
// relaxation on one stage. Violations are reported, not thrown.
MixabilityReport mixability_check(const ParticleCloud& cloud,
                                  const StageDatum& datum,
                                  const KnapsackInstance& inst, double lambda,
                                  double alpha, int z_cap = kPredictedZCap);

// log sum_i exp(v_i), -inf for an empty or all -inf input.
double log_sum_exp(std::span<const double> values);

}  // namespace boco

#endif  // BOCO_SMC_HPP_

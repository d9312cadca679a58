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

#ifndef BOCO_BASELINES_HPP_
#define BOCO_BASELINES_HPP_

#include <functional>
#include <span>
#include <utility>

#include "boco/knapsack.hpp"
#include "boco/predictor.hpp"
#include "boco/random.hpp"
#include "boco/smc.hpp"

namespace boco {

// Adam with bias correction and step decay of the learning rate:
// lr_t = lr0 * decay^floor(t / decay_interval), t counted before the
// increment. decay_interval = 1 decays on every step.
struct AdamState {
  Vec48 m = Vec48::Zero();
  Vec48 v = Vec48::Zero();
  int step = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double lr0 = 0.1;
  double decay = 0.99;
  int decay_interval = 1;

  double learning_rate() const;
};

// Returns the parameter increment -lr_t m_hat / (sqrt(v_hat) + eps) and the
// advanced state.
std::pair<Vec48, AdamState> adam_step(const AdamState& state,
                                      const Vec48& grad);

struct LossGrad {
  double loss = 0.0;
  Vec48 grad = Vec48::Zero();
};

// Frobenius distance between the prediction and the realized matrix, with its
// gradient. The gradient is zero when the loss is below 1e-12.
LossGrad mse_loss_grad(const ThetaVec& theta, const Vec3& x,
                       const Mat34& a_true);

struct ScoreGradConfig {
  int k = 20;
  double noise_std = 1.0;
};

using MatrixLoss = std::function<double(const Mat34&)>;

// (1/K) sum_i loss(a_hat + eps_i) eps_i over the given perturbations, applied
// to the row-major 12-vector form of a_hat.
Vec12 score_function_estimate(const Mat34& a_hat, const MatrixLoss& loss,
                              std::span<const Vec12> perturbations);

// Same with K perturbations drawn as noise_std times standard normals.
Vec12 score_function_estimate(const Mat34& a_hat, const MatrixLoss& loss,
                              const ScoreGradConfig& cfg, RandomStream& rng);

// Score-function estimate of the gradient of the decision regret w.r.t. the
// predicted matrix: each perturbed prediction is solved with
// solve_deterministic and scored by regret under a_true.
Vec12 score_function_grad(const Mat34& a_hat, const Mat34& a_true,
                          const KnapsackInstance& inst,
                          const ScoreGradConfig& cfg, RandomStream& rng,
                          double hindsight_value);
Vec12 score_function_grad(const Mat34& a_hat, const Mat34& a_true,
                          const KnapsackInstance& inst,
                          const ScoreGradConfig& cfg, RandomStream& rng);

// J(theta, x)^T g.
Vec48 chain_prediction_grad(const ThetaVec& theta, const Vec3& x,
                            const Vec12& g);

// Regret gradient w.r.t. the predictor parameters.
Vec48 dfl_param_grad(const ThetaVec& theta, const Vec3& x, const Mat34& a_true,
                     const KnapsackInstance& inst, const ScoreGradConfig& cfg,
                     RandomStream& rng, double hindsight_value);

// Draws a particle index by inverse CDF over the cloud weights.
std::size_t bgs_select(const ParticleCloud& cloud, RandomStream& rng);

}  // namespace boco

#endif  // BOCO_BASELINES_HPP_

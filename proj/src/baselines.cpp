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

#include "boco/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace boco {

double AdamState::learning_rate() const {
  return lr0 * std::pow(decay, step / std::max(1, decay_interval));
}

std::pair<Vec48, AdamState> adam_step(const AdamState& state,
                                      const Vec48& grad) {
  AdamState next = state;
  const double lr = state.learning_rate();
  next.step = state.step + 1;
  next.m = state.beta1 * state.m + (1.0 - state.beta1) * grad;
  next.v = state.beta2 * state.v + (1.0 - state.beta2) * grad.cwiseProduct(grad);
  const double c1 = 1.0 - std::pow(state.beta1, next.step);
  const double c2 = 1.0 - std::pow(state.beta2, next.step);
  Vec48 delta;
  for (int p = 0; p < 48; ++p) {
    const double m_hat = next.m(p) / c1;
    const double v_hat = next.v(p) / c2;
    delta(p) = -lr * m_hat / (std::sqrt(v_hat) + state.epsilon);
  }
  return {delta, next};
}

LossGrad mse_loss_grad(const ThetaVec& theta, const Vec3& x,
                       const Mat34& a_true) {
  const Vec12 residual = vectorize(predict(theta, x)) - vectorize(a_true);
  LossGrad out;
  out.loss = residual.norm();
  if (out.loss < 1e-12) return out;
  out.grad = chain_prediction_grad(theta, x, residual / out.loss);
  return out;
}

Vec12 score_function_estimate(const Mat34& a_hat, const MatrixLoss& loss,
                              std::span<const Vec12> perturbations) {
  const Vec12 base = vectorize(a_hat);
  Vec12 sum = Vec12::Zero();
  for (const Vec12& eps : perturbations) {
    sum += loss(reshape_rows(base + eps)) * eps;
  }
  return sum / static_cast<double>(perturbations.size());
}

Vec12 score_function_estimate(const Mat34& a_hat, const MatrixLoss& loss,
                              const ScoreGradConfig& cfg, RandomStream& rng) {
  if (cfg.k < 1) throw ArgumentError("score function: K must be >= 1");
  std::vector<Vec12> eps(static_cast<std::size_t>(cfg.k));
  for (Vec12& e : eps) {
    rng.fill_normal(e);
    e *= cfg.noise_std;
  }
  return score_function_estimate(a_hat, loss, eps);
}

Vec12 score_function_grad(const Mat34& a_hat, const Mat34& a_true,
                          const KnapsackInstance& inst,
                          const ScoreGradConfig& cfg, RandomStream& rng,
                          double hindsight_value) {
  const MatrixLoss loss = [&](const Mat34& perturbed) {
    const Decision d = solve_deterministic(perturbed, inst);
    return regret(d.z, a_true, inst, hindsight_value);
  };
  return score_function_estimate(a_hat, loss, cfg, rng);
}

Vec12 score_function_grad(const Mat34& a_hat, const Mat34& a_true,
                          const KnapsackInstance& inst,
                          const ScoreGradConfig& cfg, RandomStream& rng) {
  return score_function_grad(a_hat, a_true, inst, cfg, rng,
                             hindsight_optimum(a_true, inst).objective);
}

Vec48 chain_prediction_grad(const ThetaVec& theta, const Vec3& x,
                            const Vec12& g) {
  return jacobian(theta, x).transpose() * g;
}

Vec48 dfl_param_grad(const ThetaVec& theta, const Vec3& x, const Mat34& a_true,
                     const KnapsackInstance& inst, const ScoreGradConfig& cfg,
                     RandomStream& rng, double hindsight_value) {
  const Vec12 g = score_function_grad(predict(theta, x), a_true, inst, cfg,
                                      rng, hindsight_value);
  return chain_prediction_grad(theta, x, g);
}

std::size_t bgs_select(const ParticleCloud& cloud, RandomStream& rng) {
  return rng.categorical(cloud.weights);
}

}  // namespace boco

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

#include <cmath>
#include <random>
#include <vector>

#include "boco/baselines.hpp"
#include "doctest.h"
#include "oracles.hpp"

namespace {

using boco::AdamState;
using boco::Mat34;
using boco::ThetaVec;
using boco::Vec12;
using boco::Vec3;
using boco::Vec48;

ThetaVec random_theta(std::mt19937_64& gen) {
  ThetaVec t;
  std::normal_distribution<double> d(0.0, 1.0);
  for (int p = 0; p < 48; ++p) t.values(p) = d(gen);
  return t;
}

TEST_CASE("adam zero gradient gives zero step") {
  const auto [delta, next] = boco::adam_step(AdamState{}, Vec48::Zero());
  CHECK(delta == Vec48::Zero());
  CHECK(next.step == 1);
}

TEST_CASE("adam first step has magnitude lr0") {
  auto [d1, s1] = boco::adam_step(AdamState{}, Vec48::Ones());
  CHECK((d1.array() + 0.1).abs().maxCoeff() < 1e-8);
  auto [d2, s2] = boco::adam_step(AdamState{}, -2.0 * Vec48::Ones());
  CHECK((d2.array() - 0.1).abs().maxCoeff() < 1e-8);
  CHECK((s2.v.array() >= 0.0).all());
}

TEST_CASE("learning-rate schedule") {
  AdamState s;
  s.decay_interval = 1;
  for (int t = 0; t < 300; ++t) {
    CHECK(s.learning_rate() == 0.1 * std::pow(0.99, t));
    s = boco::adam_step(s, Vec48::Constant(0.3)).second;
  }
  AdamState epoch;
  epoch.decay_interval = 1000;
  for (int t = 0; t < 1000; ++t) {
    CHECK(epoch.learning_rate() == 0.1);
    epoch.step++;
  }
  CHECK(epoch.learning_rate() == 0.1 * 0.99);
}

TEST_CASE("adam is a pure function of the gradient sequence") {
  std::mt19937_64 gen(1);
  std::vector<Vec48> grads(50);
  for (Vec48& g : grads) boco::oracle::fill_uniform(g, gen, -2, 2);
  AdamState a, b;
  Vec48 xa = Vec48::Zero(), xb = Vec48::Zero();
  for (const Vec48& g : grads) {
    auto [da, na] = boco::adam_step(a, g);
    auto [db, nb] = boco::adam_step(b, g);
    xa += da;
    xb += db;
    a = na;
    b = nb;
  }
  CHECK(xa == xb);
  CHECK(a.m == b.m);
  CHECK(a.v == b.v);
}

TEST_CASE("mse loss examples") {
  const auto exact = boco::mse_loss_grad(ThetaVec{}, Vec3(1, 2, 3),
                                         Mat34::Constant(1.0));
  CHECK(exact.loss == 0.0);
  CHECK(exact.grad == Vec48::Zero());
  const auto off = boco::mse_loss_grad(ThetaVec{}, Vec3(1, 2, 3),
                                       Mat34::Constant(2.0));
  CHECK(off.loss == doctest::Approx(std::sqrt(12.0)).epsilon(1e-15));
}

TEST_CASE("mse gradient matches central differences") {
  std::mt19937_64 gen(2);
  std::normal_distribution<double> xd(0.0, 1.5);
  int checked = 0;
  double worst = 0.0;
  while (checked < 100) {
    const ThetaVec t = random_theta(gen);
    const Vec3 x(xd(gen), xd(gen), xd(gen));
    Mat34 a;
    boco::oracle::fill_uniform(a, gen, 0.0, 3.0);
    const auto lg = boco::mse_loss_grad(t, x, a);
    if (lg.loss <= 0.1) continue;
    const auto f = [&](const Vec48& v) -> Eigen::Matrix<double, 1, 1> {
      Eigen::Matrix<double, 1, 1> out;
      out(0) = (boco::oracle::direct_predict(v, x) - a).norm();
      return out;
    };
    const auto fd = boco::oracle::central_difference<1, 48>(f, t.values, 1e-5);
    worst = std::max(worst, (fd.transpose() - lg.grad).cwiseAbs().maxCoeff());
    ++checked;
  }
  CHECK(worst <= 1e-5);
}

TEST_CASE("score function with one injected perturbation") {
  const boco::KnapsackInstance inst;
  const Mat34 a_hat = Mat34::Constant(1.0);
  const Mat34 a_true = Mat34::Constant(2.0);
  Vec12 eps;
  for (int i = 0; i < 12; ++i) eps(i) = 0.1 * (i - 5);
  const auto loss = [&](const Mat34& m) {
    return boco::regret(boco::solve_deterministic(m, inst).z, a_true, inst);
  };
  const std::vector<Vec12> one{eps};
  const Vec12 g = boco::score_function_estimate(a_hat, loss, one);
  const double r = boco::regret(
      boco::solve_deterministic(boco::reshape_rows(boco::vectorize(a_hat) + eps), inst).z,
      a_true, inst);
  CHECK(g == r * eps);
}

TEST_CASE("score function recovers a linear probe") {
  Vec12 grad;
  for (int i = 0; i < 12; ++i) grad(i) = (i % 2 ? -1.0 : 1.0) * (1.0 + 0.05 * i);
  const auto probe = [&](const Mat34& m) { return grad.dot(boco::vectorize(m)); };
  boco::RandomStream rng(3);
  boco::ScoreGradConfig cfg;
  cfg.k = 100000;
  const Vec12 est =
      boco::score_function_estimate(Mat34::Zero(), probe, cfg, rng);
  for (int i = 0; i < 12; ++i) {
    CHECK(std::abs(est(i) - grad(i)) <= 0.05 * std::abs(grad(i)));
  }
}

TEST_CASE("constant loss has a zero-mean estimate") {
  boco::RandomStream rng(4);
  boco::ScoreGradConfig cfg;
  cfg.k = 100000;
  const Vec12 est = boco::score_function_estimate(
      Mat34::Constant(1.0), [](const Mat34&) { return 72.0; }, cfg, rng);
  CHECK(est.cwiseAbs().maxCoeff() <= 0.5);
}

TEST_CASE("a constant baseline shifts the estimate by c times the mean noise") {
  std::mt19937_64 gen(5);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<Vec12> eps(5000);
  Vec12 mean_eps = Vec12::Zero();
  for (Vec12& e : eps) {
    for (int i = 0; i < 12; ++i) e(i) = nd(gen);
    mean_eps += e / 5000.0;
  }
  const boco::KnapsackInstance inst;
  const Mat34 a_true = Mat34::Constant(100.0);
  const auto reg = [&](const Mat34& m) {
    return boco::regret(boco::solve_deterministic(m, inst).z, a_true, inst);
  };
  const auto centered = [&](const Mat34& m) { return reg(m) - 72.0; };
  const Vec12 a = boco::score_function_estimate(Mat34::Constant(1.0), reg, eps);
  const Vec12 b =
      boco::score_function_estimate(Mat34::Constant(1.0), centered, eps);
  CHECK((a - b - 72.0 * mean_eps).cwiseAbs().maxCoeff() <= 1e-9);
  // Every decision but z = 0 is infeasible under the blocking truth.
  for (int i = 0; i < 200; ++i) {
    const double r = reg(boco::reshape_rows(Vec12::Ones() + eps[i]));
    CHECK((r == 0.0 || r == 72.0));
  }
}

TEST_CASE("regret gradient with the hindsight overload") {
  const boco::KnapsackInstance inst;
  const Mat34 a_true = Mat34::Constant(1.5);
  boco::ScoreGradConfig cfg;
  boco::RandomStream r1(7), r2(7);
  const Vec12 a = boco::score_function_grad(Mat34::Constant(1.0), a_true, inst, cfg, r1);
  const Vec12 b = boco::score_function_grad(
      Mat34::Constant(1.0), a_true, inst, cfg, r2,
      boco::hindsight_optimum(a_true, inst).objective);
  CHECK(a == b);
}

TEST_CASE("score function requires K >= 1") {
  boco::RandomStream rng(8);
  boco::ScoreGradConfig cfg;
  cfg.k = 0;
  CHECK_THROWS_AS(boco::score_function_estimate(
                      Mat34::Constant(1.0), [](const Mat34&) { return 0.0; },
                      cfg, rng),
                  boco::ArgumentError);
}

TEST_CASE("dfl gradient structure") {
  std::mt19937_64 gen(9);
  const ThetaVec t = random_theta(gen);
  CHECK(boco::chain_prediction_grad(t, Vec3(1, 2, 3), Vec12::Zero()) ==
        Vec48::Zero());
  const boco::KnapsackInstance inst;
  const Mat34 a_true = Mat34::Constant(1.3);
  const double hs = boco::hindsight_optimum(a_true, inst).objective;
  boco::ScoreGradConfig cfg;
  boco::RandomStream r1(10), r2(10);
  const Vec48 g0 = boco::dfl_param_grad(t, Vec3::Zero(), a_true, inst, cfg, r1, hs);
  CHECK(g0.head<36>().cwiseAbs().maxCoeff() == 0.0);
  const Vec48 g1 = boco::dfl_param_grad(t, Vec3(0.3, -1, 2), a_true, inst, cfg, r1, hs);
  const Vec48 g2a = boco::dfl_param_grad(t, Vec3::Zero(), a_true, inst, cfg, r2, hs);
  const Vec48 g2b = boco::dfl_param_grad(t, Vec3(0.3, -1, 2), a_true, inst, cfg, r2, hs);
  CHECK(g0 == g2a);
  CHECK(g1 == g2b);
}

TEST_CASE("dfl gradient chains the score estimate through the Jacobian") {
  std::mt19937_64 gen(11);
  const ThetaVec t = random_theta(gen);
  const Vec3 x(0.5, -0.2, 1.0);
  const boco::KnapsackInstance inst;
  const Mat34 a_true = Mat34::Constant(1.1);
  const double hs = boco::hindsight_optimum(a_true, inst).objective;
  boco::ScoreGradConfig cfg;
  boco::RandomStream r1(12), r2(12);
  const Vec12 g = boco::score_function_grad(boco::predict(t, x), a_true, inst,
                                            cfg, r1, hs);
  const Vec48 expected = boco::jacobian(t, x).transpose() * g;
  CHECK(boco::dfl_param_grad(t, x, a_true, inst, cfg, r2, hs) == expected);
}

TEST_CASE("bgs_select frequencies") {
  boco::ParticleCloud c;
  c.thetas.resize(20);
  c.weights.assign(20, 0.0);
  c.weights[0] = 1.0;
  boco::RandomStream rng(13);
  for (int i = 0; i < 1000; ++i) CHECK(boco::bgs_select(c, rng) == 0);

  const int draws = 100000;
  c.weights.assign(20, 0.05);
  std::vector<double> counts(20, 0.0);
  for (int i = 0; i < draws; ++i) counts[boco::bgs_select(c, rng)] += 1.0;
  double chi2 = 0.0;
  for (double k : counts) {
    CHECK(std::abs(k / draws - 0.05) <= 0.01);
    chi2 += (k - draws * 0.05) * (k - draws * 0.05) / (draws * 0.05);
  }
  // Upper 0.001 quantile of chi-squared with 19 degrees of freedom.
  CHECK(chi2 < 43.82);

  c.thetas.resize(2);
  c.weights = {0.25, 0.75};
  double first = 0.0;
  for (int i = 0; i < draws; ++i) first += boco::bgs_select(c, rng) == 0;
  CHECK(std::abs(first / draws - 0.25) <= 0.01);
  const double e0 = 0.25 * draws, e1 = 0.75 * draws;
  const double chi2_two = (first - e0) * (first - e0) / e0 +
                          (draws - first - e1) * (draws - first - e1) / e1;
  // Upper 0.001 quantile with 1 degree of freedom.
  CHECK(chi2_two < 10.83);
}

}  // namespace

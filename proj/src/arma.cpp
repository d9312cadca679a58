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

#include "boco/arma.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "boco/io.hpp"

namespace boco {

namespace {

bool all_finite(const auto& m) { return m.array().isFinite().all(); }

Mat12x3 tile_pattern(const Mat3& block) {
  Mat12x3 out;
  for (int r = 0; r < 4; ++r) out.block<3, 3>(3 * r, 0) = block;
  return out;
}

}  // namespace

ArmaConfig ArmaConfig::defaults() {
  ArmaConfig c;
  c.phi1 << 0.5, -0.9, 0.0,
            1.1, -0.7, 0.0,
            0.0, 0.0, 0.5;
  c.phi2 << 0.0, -0.5, 0.0,
            -0.5, 0.0, 0.0,
            0.0, 0.0, 0.0;
  c.theta1 << 0.4, 0.8, 0.0,
              -1.1, -0.3, 0.0,
              0.0, 0.0, 0.0;
  c.theta2 << 0.0, -0.8, 0.0,
              -1.1, 0.0, 0.0,
              0.0, 0.0, 0.0;
  c.sigma_u << 1.0, 0.5, 0.0,
               0.5, 1.2, 0.5,
               0.0, 0.5, 0.8;

  Mat3 g_block;
  g_block << 0.8, 0.1, 0.1,
             0.1, 0.8, 0.1,
             0.1, 0.1, 0.8;
  c.g = 2.5 * tile_pattern(g_block);

  Mat12x3 b_pattern;
  b_pattern << 0, -1, -1,
               -1, 0, -1,
               -1, -1, 0,
               0, -1, 1,
               -1, 0, 1,
               -1, 1, 0,
               0, 1, -1,
               1, 0, -1,
               1, -1, 0,
               0, 1, 1,
               1, 0, 1,
               1, 1, 0;
  c.b = 7.5 * b_pattern;
  c.shift = 1.0;
  return c;
}

void ArmaConfig::validate() const {
  if ((sigma_u - sigma_u.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw ArgumentError("sigma_u must be symmetric");
  }
  const Eigen::SelfAdjointEigenSolver<Mat3> eig(sigma_u);
  if (eig.eigenvalues().minCoeff() < -1e-12) {
    throw ArgumentError("sigma_u must be positive semidefinite");
  }
  if (!(scale > 0.0)) throw ArgumentError("scale must be positive");
}

Mat3 semidefinite_cholesky(const Mat3& m) {
  Mat3 l = Mat3::Zero();
  const double tol = 1e-14 * std::max(1.0, m.diagonal().cwiseAbs().maxCoeff());
  for (int j = 0; j < 3; ++j) {
    double pivot = m(j, j);
    for (int k = 0; k < j; ++k) pivot -= l(j, k) * l(j, k);
    if (pivot < -tol) throw ArgumentError("sigma_u is not factorizable");
    if (pivot <= tol) continue;
    l(j, j) = std::sqrt(pivot);
    for (int i = j + 1; i < 3; ++i) {
      double s = m(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

std::pair<Vec3, ArmaState> arma_step(const ArmaState& state,
                                     const ArmaConfig& config, const Vec3& u) {
  if (!all_finite(u) || !all_finite(state.x_prev) ||
      !all_finite(state.x_prev2) || !all_finite(state.u_prev) ||
      !all_finite(state.u_prev2)) {
    throw NumericError("arma_step: non-finite input");
  }
  const Vec3 x = u + config.phi1 * state.x_prev + config.phi2 * state.x_prev2 +
                 config.theta1 * state.u_prev + config.theta2 * state.u_prev2;
  ArmaState next;
  next.x_prev = x;
  next.x_prev2 = state.x_prev;
  next.u_prev = u;
  next.u_prev2 = state.u_prev;
  return {x, next};
}

Mat34 synthesize_weights(const Vec3& x, const Vec3& delta, const Vec12& eps,
                         const ArmaConfig& config) {
  if (!all_finite(x) || !all_finite(delta) || !all_finite(eps)) {
    throw NumericError("synthesize_weights: non-finite input");
  }
  const Vec12 raw = config.g * (x + config.delta_scale * delta) +
                    (config.b * x).cwiseProduct(eps);
  Vec12 xi;
  for (int i = 0; i < 12; ++i) {
    xi(i) = std::max(config.clip_floor, raw(i)) / config.scale + config.shift;
  }
  return reshape_rows(xi);
}

ArmaGenerator::ArmaGenerator(ArmaConfig config, std::uint64_t seed,
                             int burn_in)
    : config_(std::move(config)), rng_(seed) {
  config_.validate();
  chol_ = semidefinite_cholesky(config_.sigma_u);
  for (int i = 0; i < burn_in; ++i) next();
  t_ = 0;
}

StageDatum ArmaGenerator::next() {
  Vec3 z;
  rng_.fill_normal(z);
  const Vec3 u = chol_ * z;
  Vec3 delta;
  rng_.fill_normal(delta);
  Vec12 eps;
  rng_.fill_normal(eps);

  auto [x, advanced] = arma_step(state_, config_, u);
  state_ = advanced;
  StageDatum d;
  d.t = t_++;
  d.x = x;
  d.a = synthesize_weights(x, delta, eps, config_);
  return d;
}

std::vector<StageDatum> generate_stream(const ArmaConfig& config,
                                        std::uint64_t seed, int horizon,
                                        int burn_in) {
  if (horizon < 0) throw ArgumentError("horizon must be >= 0");
  ArmaGenerator gen(config, seed, burn_in);
  std::vector<StageDatum> out;
  out.reserve(static_cast<std::size_t>(horizon));
  for (int t = 0; t < horizon; ++t) out.push_back(gen.next());
  return out;
}

void write_stream_csv(std::ostream& out, std::span<const StageDatum> stream) {
  out << "t,x1,x2,x3";
  for (int r = 1; r <= 3; ++r) {
    for (int c = 1; c <= 4; ++c) out << ",a" << r << c;
  }
  out << '\n';
  for (const StageDatum& d : stream) {
    out << d.t;
    for (int i = 0; i < 3; ++i) out << ',' << format_double(d.x(i));
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 4; ++c) out << ',' << format_double(d.a(r, c));
    }
    out << '\n';
  }
}

}  // namespace boco

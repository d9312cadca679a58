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

#ifndef BOCO_ARMA_HPP_
#define BOCO_ARMA_HPP_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "boco/random.hpp"
#include "boco/types.hpp"

namespace boco {

// Constants of the vector ARMA(2,2) covariate process and of the map from a
// covariate to the 3x4 item-weight matrix. defaults() uses shift = 1, which
// puts the weights at 1 +- small noise with a hard floor at 0; shift = 2
// gives weights >= 1 (see README, "Data generator").
struct ArmaConfig {
  Mat3 phi1;
  Mat3 phi2;
  Mat3 theta1;
  Mat3 theta2;
  Mat3 sigma_u;
  Mat12x3 g;
  Mat12x3 b;
  double clip_floor = -100.0;
  double scale = 100.0;
  double shift = 1.0;
  double delta_scale = 0.25;

  static ArmaConfig defaults();

  // Throws ArgumentError unless sigma_u is symmetric positive semidefinite.
  void validate() const;
};

// Lagged covariates and innovations. Zero at t = 0, no burn-in by default.
struct ArmaState {
  Vec3 x_prev = Vec3::Zero();
  Vec3 x_prev2 = Vec3::Zero();
  Vec3 u_prev = Vec3::Zero();
  Vec3 u_prev2 = Vec3::Zero();
};

// One observation pair: covariate x and realized weight matrix a.
struct StageDatum {
  int t = 0;
  Vec3 x = Vec3::Zero();
  Mat34 a = Mat34::Constant(2.0);
};

// x_t = u_t + Phi1 x_{t-1} + Phi2 x_{t-2} + Theta1 u_{t-1} + Theta2 u_{t-2}.
// Returns x_t and the state with lags shifted. Throws NumericError on
// non-finite input.
std::pair<Vec3, ArmaState> arma_step(const ArmaState& state,
                                     const ArmaConfig& config, const Vec3& u);

// xi~ = G (x + delta_scale * delta) + (B x) o eps, clipped below at
// clip_floor, divided by scale, shifted, and stacked row-major into 3x4.
Mat34 synthesize_weights(const Vec3& x, const Vec3& delta, const Vec12& eps,
                         const ArmaConfig& config);

// Lower-triangular L with L L^T = m for a symmetric positive semidefinite m.
// Zero pivots give zero columns. Throws ArgumentError on a negative pivot.
Mat3 semidefinite_cholesky(const Mat3& m);

// Seeded stream of stage data. Each stage draws u (3 normals mapped through
// the Cholesky factor), then delta (3), then eps (12).
class ArmaGenerator {
 public:
  ArmaGenerator(ArmaConfig config, std::uint64_t seed, int burn_in = 0);

  StageDatum next();

 private:
  ArmaConfig config_;
  Mat3 chol_;
  ArmaState state_;
  RandomStream rng_;
  int t_ = 0;
};

std::vector<StageDatum> generate_stream(const ArmaConfig& config,
                                        std::uint64_t seed, int horizon,
                                        int burn_in = 0);

// Columns t,x1,x2,x3,a11..a34 with 17 significant digits.
void write_stream_csv(std::ostream& out, std::span<const StageDatum> stream);

}  // namespace boco

#endif  // BOCO_ARMA_HPP_

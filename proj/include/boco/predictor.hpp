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

#ifndef BOCO_PREDICTOR_HPP_
#define BOCO_PREDICTOR_HPP_

#include "boco/types.hpp"

namespace boco {

// Parameters of the sigmoid-linear predictor. Layout: the 12x3 weight block
// row-major (entry (k, j) at 3k + j), followed by the 12 biases.
struct ThetaVec {
  static constexpr int kWeights = 36;
  static constexpr int kBiases = 12;
  static constexpr int kSize = kWeights + kBiases;
  static constexpr int weight_index(int k, int j) { return 3 * k + j; }
  static constexpr int bias_index(int k) { return kWeights + k; }

  Vec48 values = Vec48::Zero();

  double& weight(int k, int j) { return values(weight_index(k, j)); }
  double weight(int k, int j) const { return values(weight_index(k, j)); }
  double& bias(int k) { return values(bias_index(k)); }
  double bias(int k) const { return values(bias_index(k)); }

  Eigen::Map<const Eigen::Matrix<double, 12, 3, Eigen::RowMajor>> weights()
      const {
    return Eigen::Map<const Eigen::Matrix<double, 12, 3, Eigen::RowMajor>>(
        values.data());
  }
  auto biases() const { return values.tail<kBiases>(); }

  friend bool operator==(const ThetaVec& a, const ThetaVec& b) {
    return a.values == b.values;
  }
};

// Logistic function, stable for large |s|.
double sigmoid(double s);

// Pre-activation W x + b.
Vec12 pre_activation(const ThetaVec& theta, const Vec3& x);

// A_hat = 2 S(W x + b), vectorized entry k placed row-major. Entries lie in
// (0, 2), up to rounding at saturation.
Mat34 predict(const ThetaVec& theta, const Vec3& x);

// d vec(A_hat)_k / d theta_p. Row k is nonzero only in the three weights of
// row k of W and in bias k.
Mat12x48 jacobian(const ThetaVec& theta, const Vec3& x);

}  // namespace boco

#endif  // BOCO_PREDICTOR_HPP_

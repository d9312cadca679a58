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

#include "boco/predictor.hpp"

#include <cmath>

namespace boco {

double sigmoid(double s) {
  if (s >= 0.0) return 1.0 / (1.0 + std::exp(-s));
  const double e = std::exp(s);
  return e / (1.0 + e);
}

Vec12 pre_activation(const ThetaVec& theta, const Vec3& x) {
  return theta.weights() * x + theta.biases();
}

Mat34 predict(const ThetaVec& theta, const Vec3& x) {
  const Vec12 s = pre_activation(theta, x);
  Vec12 out;
  for (int k = 0; k < 12; ++k) out(k) = 2.0 * sigmoid(s(k));
  return reshape_rows(out);
}

Mat12x48 jacobian(const ThetaVec& theta, const Vec3& x) {
  const Vec12 s = pre_activation(theta, x);
  Mat12x48 jac = Mat12x48::Zero();
  for (int k = 0; k < 12; ++k) {
    const double sk = sigmoid(s(k));
    const double d = 2.0 * sk * (1.0 - sk);
    for (int j = 0; j < 3; ++j) jac(k, ThetaVec::weight_index(k, j)) = d * x(j);
    jac(k, ThetaVec::bias_index(k)) = d;
  }
  return jac;
}

}  // namespace boco

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

#ifndef BOCO_TYPES_HPP_
#define BOCO_TYPES_HPP_

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace boco {

using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Vec12 = Eigen::Matrix<double, 12, 1>;
using Vec48 = Eigen::Matrix<double, 48, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat12x3 = Eigen::Matrix<double, 12, 3>;
using Mat12x48 = Eigen::Matrix<double, 12, 48>;

// Weight matrices are 3 resources x 4 items. Row-major storage makes
// `vectorize()` match the "every 4 consecutive elements form a row" layout.
using Mat34 = Eigen::Matrix<double, 3, 4, Eigen::RowMajor>;

using IntVec4 = Eigen::Matrix<int, 4, 1>;

inline Vec12 vectorize(const Mat34& m) {
  return Eigen::Map<const Vec12>(m.data());
}

inline Mat34 reshape_rows(const Vec12& v) {
  return Eigen::Map<const Mat34>(v.data());
}

// Error categories. The CLI maps NumericError to exit code 1.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace boco

#endif  // BOCO_TYPES_HPP_

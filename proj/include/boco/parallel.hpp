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

#ifndef BOCO_PARALLEL_HPP_
#define BOCO_PARALLEL_HPP_

#include <cstddef>
#include <exception>
#include <functional>
#include <span>
#include <vector>

#include "boco/predictor.hpp"

namespace boco {

// kSerial is the reference path. kParallel distributes independent work items
// over OpenMP threads; results are written by index, so both paths produce
// bit-identical output.
enum class ExecPolicy { kSerial, kParallel };

using ThetaLoss = std::function<double(const ThetaVec&)>;

// out[i] = loss(thetas[i]). `loss` must be reentrant under kParallel.
std::vector<double> evaluate_losses(std::span<const ThetaVec> thetas,
                                    const ThetaLoss& loss,
                                    ExecPolicy policy = ExecPolicy::kSerial);

// Runs body(i) for i in [0, n). The first exception thrown by any item is
// rethrown after the loop.
void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body,
                    ExecPolicy policy);

}  // namespace boco

#endif  // BOCO_PARALLEL_HPP_

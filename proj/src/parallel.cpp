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

#include "boco/parallel.hpp"

#include <mutex>

namespace boco {

void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body,
                    ExecPolicy policy) {
  if (policy == ExecPolicy::kSerial) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr first_error;
  std::mutex error_mutex;
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

std::vector<double> evaluate_losses(std::span<const ThetaVec> thetas,
                                    const ThetaLoss& loss, ExecPolicy policy) {
  std::vector<double> out(thetas.size());
  for_each_index(
      thetas.size(), [&](std::size_t i) { out[i] = loss(thetas[i]); }, policy);
  return out;
}

}  // namespace boco

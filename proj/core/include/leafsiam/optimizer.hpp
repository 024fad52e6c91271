/**
 * Copyright 2026 The leafsiam Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <vector>

#include "leafsiam/tensor.hpp"

namespace leafsiam {

struct AdamOptions {
  double learning_rate = 1e-3;
  double weight_decay = 1e-4;  // coupled: added to the gradient as wd * param
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

template <class T>
struct AdamState {
  std::int64_t step = 0;
  std::vector<std::vector<T>> first_moment;
  std::vector<std::vector<T>> second_moment;
};

// One bias-corrected Adam update. An empty state is sized on first use;
// mismatched shapes throw a structural error.
template <class T>
void adam_step(NetworkParams<T>& params, const NetworkParams<T>& grads, AdamState<T>& state,
               const AdamOptions& options);

}  // namespace leafsiam

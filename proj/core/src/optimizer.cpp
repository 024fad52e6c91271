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

#include "leafsiam/optimizer.hpp"

#include <cmath>

#include "leafsiam/error.hpp"

namespace leafsiam {

template <class T>
void adam_step(NetworkParams<T>& params, const NetworkParams<T>& grads, AdamState<T>& state,
               const AdamOptions& options) {
  const std::size_t n = params.tensors.size();
  if (grads.tensors.size() != n) {
    throw Error(ErrorKind::kStructural, "gradient set does not match the parameters");
  }
  if (state.first_moment.empty() && state.step == 0) {
    for (const auto& t : params.tensors) {
      state.first_moment.emplace_back(t.data.size(), T(0));
      state.second_moment.emplace_back(t.data.size(), T(0));
    }
  }
  if (state.first_moment.size() != n || state.second_moment.size() != n) {
    throw Error(ErrorKind::kStructural, "optimizer state does not match the parameters");
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto sz = params.tensors[i].data.size();
    if (grads.tensors[i].data.size() != sz || state.first_moment[i].size() != sz ||
        state.second_moment[i].size() != sz) {
      throw Error(ErrorKind::kStructural,
                  "shape mismatch for tensor " + params.tensors[i].name + " in adam_step");
    }
  }

  ++state.step;
  const double t = static_cast<double>(state.step);
  const double correction1 = 1.0 - std::pow(options.beta1, t);
  const double correction2 = 1.0 - std::pow(options.beta2, t);
  const T b1 = static_cast<T>(options.beta1), b2 = static_cast<T>(options.beta2);
  const T wd = static_cast<T>(options.weight_decay);
  const T step_size = static_cast<T>(options.learning_rate / correction1);
  const T inv_sqrt_c2 = static_cast<T>(1.0 / std::sqrt(correction2));
  const T eps = static_cast<T>(options.eps);

  for (std::size_t i = 0; i < n; ++i) {
    auto& p = params.tensors[i].data;
    const auto& g = grads.tensors[i].data;
    auto& m = state.first_moment[i];
    auto& v = state.second_moment[i];
    for (std::size_t k = 0; k < p.size(); ++k) {
      const T gk = g[k] + wd * p[k];
      m[k] = b1 * m[k] + (T(1) - b1) * gk;
      v[k] = b2 * v[k] + (T(1) - b2) * gk * gk;
      p[k] -= step_size * m[k] / (std::sqrt(v[k]) * inv_sqrt_c2 + eps);
    }
  }
}

template void adam_step<float>(NetworkParams<float>&, const NetworkParams<float>&,
                               AdamState<float>&, const AdamOptions&);
template void adam_step<double>(NetworkParams<double>&, const NetworkParams<double>&,
                                AdamState<double>&, const AdamOptions&);

}  // namespace leafsiam

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
#include <span>
#include <vector>

#include "leafsiam/backbone.hpp"

namespace leafsiam {

// sqrt(sum_i (a_i - b_i)^2). Throws a dimensional error on length mismatch.
template <class T>
double euclidean_distance(std::span<const T> a, std::span<const T> b);

inline double euclidean_distance(const Embedding& a, const Embedding& b) {
  return euclidean_distance<float>(a, b);
}

// L = (1 - Y) * D^2 / 2 + Y * max(0, m - D)^2 / 2, Y = 0 for similar pairs.
// Throws a contract violation for D < 0, m <= 0 or Y outside {0, 1}.
double contrastive_loss(double distance, int label, double margin);

// dL/dD for the loss above.
double contrastive_loss_derivative(double distance, int label, double margin);

template <class T>
struct PairLoss {
  double loss = 0.0;
  double distance = 0.0;
  std::vector<T> grad_first;   // dL/d(first embedding)
  std::vector<T> grad_second;  // dL/d(second embedding)
};

// Loss and embedding gradients for one pair. At D = 0 the dissimilar-pair
// gradient is taken as zero.
template <class T>
PairLoss<T> pair_loss(std::span<const T> first, std::span<const T> second, int label,
                      double margin);

// Both images go through the same backbone and the same parameters. Adds
// `grad_scale * dL/dparams` into `grads` when it is non-null and returns L.
template <class T>
double siamese_pair_loss(const Backbone<T>& backbone, const NetworkParams<T>& params,
                         const FeatureMap<T>& first, const FeatureMap<T>& second, int label,
                         double margin, Mode mode, std::uint64_t dropout_seed_first,
                         std::uint64_t dropout_seed_second, NetworkParams<T>* grads,
                         double grad_scale = 1.0);

}  // namespace leafsiam

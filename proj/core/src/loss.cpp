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

#include "leafsiam/loss.hpp"

#include <algorithm>
#include <cmath>

#include "leafsiam/error.hpp"

namespace leafsiam {

template <class T>
double euclidean_distance(std::span<const T> a, std::span<const T> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorKind::kDimension, "embedding lengths " + std::to_string(a.size()) + " and " +
                                           std::to_string(b.size()) + " differ");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    sum += d * d;
  }
  return std::sqrt(sum);
}

namespace {

void check_loss_args(double distance, int label, double margin) {
  if (!(distance >= 0.0)) throw Error(ErrorKind::kContract, "distance must be non-negative");
  if (!(margin > 0.0)) throw Error(ErrorKind::kContract, "margin must be positive");
  if (label != 0 && label != 1) throw Error(ErrorKind::kContract, "pair label must be 0 or 1");
}

}  // namespace

double contrastive_loss(double distance, int label, double margin) {
  check_loss_args(distance, label, margin);
  if (label == 0) return 0.5 * distance * distance;
  const double hinge = std::max(0.0, margin - distance);
  return 0.5 * hinge * hinge;
}

double contrastive_loss_derivative(double distance, int label, double margin) {
  check_loss_args(distance, label, margin);
  if (label == 0) return distance;
  return distance < margin ? -(margin - distance) : 0.0;
}

template <class T>
PairLoss<T> pair_loss(std::span<const T> first, std::span<const T> second, int label,
                      double margin) {
  PairLoss<T> out;
  out.distance = euclidean_distance<T>(first, second);
  out.loss = contrastive_loss(out.distance, label, margin);
  out.grad_first.assign(first.size(), T(0));
  out.grad_second.assign(first.size(), T(0));
  // Similar pairs: L = |e1 - e2|^2 / 2, so dL/de1 = e1 - e2 even at D = 0.
  double coeff = 0.0;
  if (label == 0) {
    coeff = 1.0;
  } else if (out.distance > 0.0 && out.distance < margin) {
    coeff = -(margin - out.distance) / out.distance;
  }
  for (std::size_t i = 0; i < first.size(); ++i) {
    const double diff = static_cast<double>(first[i]) - static_cast<double>(second[i]);
    out.grad_first[i] = static_cast<T>(coeff * diff);
    out.grad_second[i] = static_cast<T>(-coeff * diff);
  }
  return out;
}

template <class T>
double siamese_pair_loss(const Backbone<T>& backbone, const NetworkParams<T>& params,
                         const FeatureMap<T>& first, const FeatureMap<T>& second, int label,
                         double margin, Mode mode, std::uint64_t dropout_seed_first,
                         std::uint64_t dropout_seed_second, NetworkParams<T>* grads,
                         double grad_scale) {
  if (grads == nullptr) {
    const auto e1 = backbone.forward(params, first, mode, dropout_seed_first);
    const auto e2 = backbone.forward(params, second, mode, dropout_seed_second);
    return contrastive_loss(euclidean_distance<T>(e1, e2), label, margin);
  }
  ForwardTrace<T> t1, t2;
  const auto e1 = backbone.forward(params, first, mode, dropout_seed_first, &t1);
  const auto e2 = backbone.forward(params, second, mode, dropout_seed_second, &t2);
  auto pl = pair_loss<T>(e1, e2, label, margin);
  for (auto& g : pl.grad_first) g = static_cast<T>(g * grad_scale);
  for (auto& g : pl.grad_second) g = static_cast<T>(g * grad_scale);
  backbone.backward(params, t1, pl.grad_first, *grads);
  backbone.backward(params, t2, pl.grad_second, *grads);
  return pl.loss;
}

#define LEAFSIAM_INSTANTIATE_LOSS(T)                                                         \
  template double euclidean_distance<T>(std::span<const T>, std::span<const T>);            \
  template PairLoss<T> pair_loss<T>(std::span<const T>, std::span<const T>, int, double);   \
  template double siamese_pair_loss<T>(const Backbone<T>&, const NetworkParams<T>&,          \
                                       const FeatureMap<T>&, const FeatureMap<T>&, int, double, \
                                       Mode, std::uint64_t, std::uint64_t, NetworkParams<T>*, \
                                       double);

LEAFSIAM_INSTANTIATE_LOSS(float)
LEAFSIAM_INSTANTIATE_LOSS(double)

}  // namespace leafsiam

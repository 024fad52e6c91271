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

#include "leafsiam/random.hpp"
#include "leafsiam/tensor.hpp"

namespace leafsiam {

// Single-image layer kernels. Backward functions accumulate (+=) into the
// parameter gradients and overwrite the input gradient.

struct ConvGeometry {
  int in_channels = 0;
  int in_height = 0;
  int in_width = 0;
  int out_channels = 0;
  int kernel = 1;
  int stride = 1;
  int pad = 0;

  int out_height() const noexcept { return (in_height + 2 * pad - kernel) / stride + 1; }
  int out_width() const noexcept { return (in_width + 2 * pad - kernel) / stride + 1; }
  int patch_size() const noexcept { return in_channels * kernel * kernel; }
};

// `columns` receives the (patch_size x out_h*out_w) im2col matrix, kept for
// the backward pass.
template <class T>
void conv2d_forward(const FeatureMap<T>& input, std::span<const T> weight, std::span<const T> bias,
                    const ConvGeometry& geom, FeatureMap<T>& output, std::vector<T>& columns);

// grad_input may be null when the input gradient is not needed.
template <class T>
void conv2d_backward(const std::vector<T>& columns, std::span<const T> weight,
                     const FeatureMap<T>& grad_output, const ConvGeometry& geom,
                     std::span<T> grad_weight, std::span<T> grad_bias, FeatureMap<T>* grad_input);

template <class T>
void relu_forward(std::span<T> values);

// Zeroes grad where the ReLU output was not positive.
template <class T>
void relu_backward(std::span<const T> output, std::span<T> grad);

// Cross-channel local response normalisation:
//   b_c = a_c / (k + alpha/size * sum_{|c'-c| <= size/2} a_{c'}^2)^beta
// with the window truncated at the channel boundaries.
struct LrnParams {
  int size = 5;
  double alpha = 1e-4;
  double beta = 0.75;
  double k = 2.0;
};

// `scale` receives the denominator base (k + alpha/size * sum) per element.
template <class T>
void lrn_forward(const FeatureMap<T>& input, const LrnParams& p, FeatureMap<T>& output,
                 std::vector<T>& scale);

template <class T>
void lrn_backward(const FeatureMap<T>& input, const FeatureMap<T>& output,
                  const std::vector<T>& scale, const FeatureMap<T>& grad_output,
                  const LrnParams& p, FeatureMap<T>& grad_input);

// Max pooling without padding; out = floor((n - kernel) / stride) + 1.
// `argmax` holds the in-plane index of each selected input element.
template <class T>
void maxpool_forward(const FeatureMap<T>& input, int kernel, int stride, FeatureMap<T>& output,
                     std::vector<std::int32_t>& argmax);

template <class T>
void maxpool_backward(const std::vector<std::int32_t>& argmax, const FeatureMap<T>& grad_output,
                      int in_height, int in_width, FeatureMap<T>& grad_input);

// Inverted dropout mask: each entry is 0 with probability p, else 1/(1-p).
template <class T>
std::vector<T> dropout_mask(std::size_t n, double p, Rng& rng);

// y = W x + b, W stored row-major (out x in).
template <class T>
void linear_forward(std::span<const T> weight, std::span<const T> bias, std::span<const T> input,
                    std::span<T> output);

template <class T>
void linear_backward(std::span<const T> weight, std::span<const T> input,
                     std::span<const T> grad_output, std::span<T> grad_weight,
                     std::span<T> grad_bias, std::span<T> grad_input);

}  // namespace leafsiam

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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "leafsiam/layers.hpp"
#include "leafsiam/tensor.hpp"

namespace leafsiam {

inline constexpr int kEmbeddingSize = 32;

using Embedding = std::vector<float>;

enum class Mode { kTrain, kEval };

// Conv(kernel, stride, pad) + ReLU, then optional LRN, max pool and dropout,
// in that order.
struct ConvBlockSpec {
  int out_channels = 0;
  int kernel = 1;
  int stride = 1;
  int pad = 0;
  bool lrn = false;
  bool pool = false;
  double dropout = 0.0;
};

// Fully connected layer with optional ReLU and dropout.
struct FcBlockSpec {
  int out_features = 0;
  bool relu = true;
  double dropout = 0.0;
};

struct BackboneConfig {
  int in_channels = 3;
  int in_height = 128;
  int in_width = 128;
  std::vector<ConvBlockSpec> conv;
  std::vector<FcBlockSpec> fc;
  LrnParams lrn;
  int pool_kernel = 3;
  int pool_stride = 2;

  // The nine-block 3x128x128 -> 32 network.
  static BackboneConfig reference();

  int embedding_size() const { return fc.empty() ? 0 : fc.back().out_features; }
};

// One entry of the spatial shape chain ("conv1", "pool1", ..., "flatten").
struct LayerShape {
  std::string layer;
  int channels = 0;
  int height = 0;
  int width = 0;

  friend bool operator==(const LayerShape&, const LayerShape&) = default;
};

template <class T>
struct ConvBlockTrace {
  ConvGeometry geometry;
  std::vector<T> columns;          // im2col of the block input
  FeatureMap<T> activation;        // conv + ReLU
  std::vector<T> lrn_scale;        // empty without LRN
  FeatureMap<T> lrn_output;        // empty without LRN
  std::vector<std::int32_t> argmax;  // empty without pooling
  int pool_in_height = 0;
  int pool_in_width = 0;
  std::vector<T> dropout_mask;     // empty in eval mode or p = 0
};

template <class T>
struct FcBlockTrace {
  std::vector<T> input;
  std::vector<T> activation;    // after the optional ReLU
  std::vector<T> dropout_mask;  // empty in eval mode or p = 0
};

// Activations retained by a forward pass for backpropagation, plus the shape
// chain actually observed.
template <class T>
struct ForwardTrace {
  Mode mode = Mode::kEval;
  std::vector<ConvBlockTrace<T>> conv;
  std::vector<FcBlockTrace<T>> fc;
  std::vector<LayerShape> shapes;
  std::vector<T> embedding;
};

template <class T>
class Backbone {
 public:
  // Throws a structural error if the configuration yields an empty feature
  // map anywhere in the chain.
  explicit Backbone(BackboneConfig config);

  const BackboneConfig& config() const noexcept { return config_; }
  const std::vector<LayerShape>& shape_plan() const noexcept { return plan_; }
  std::size_t flatten_size() const noexcept { return flatten_size_; }
  std::size_t param_count() const noexcept { return param_count_; }

  // Kernels ~ U(-sqrt(6 / fan_in), sqrt(6 / fan_in)), biases zero.
  NetworkParams<T> init_params(std::uint64_t seed) const;
  NetworkParams<T> zero_params() const;

  // Throws a structural error naming the first tensor whose name or shape
  // does not match this architecture.
  void check_params(const NetworkParams<T>& params) const;

  // Runs all blocks. In train mode dropout masks come from `dropout_seed`;
  // in eval mode dropout is the identity. When `trace` is non-null it
  // receives everything backward() needs.
  std::vector<T> forward(const NetworkParams<T>& params, const FeatureMap<T>& input, Mode mode,
                         std::uint64_t dropout_seed = 0, ForwardTrace<T>* trace = nullptr) const;

  // Accumulates d(<embedding, grad_embedding>)/d(params) into `grads`.
  void backward(const NetworkParams<T>& params, const ForwardTrace<T>& trace,
                std::span<const T> grad_embedding, NetworkParams<T>& grads) const;

  NetworkParams<T> backward(const NetworkParams<T>& params, const ForwardTrace<T>& trace,
                            std::span<const T> grad_embedding) const;

 private:
  BackboneConfig config_;
  std::vector<LayerShape> plan_;
  std::vector<ConvGeometry> geometry_;
  std::vector<std::pair<std::string, std::vector<int>>> layout_;
  std::size_t flatten_size_ = 0;
  std::size_t param_count_ = 0;
};

extern template class Backbone<float>;
extern template class Backbone<double>;

}  // namespace leafsiam

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
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "leafsiam/image.hpp"

namespace leafsiam {

// Single-image activation volume in channel-major order.
template <class T>
struct FeatureMap {
  int channels = 0;
  int height = 0;
  int width = 0;
  std::vector<T> data;

  FeatureMap() = default;
  FeatureMap(int c, int h, int w, T fill = T(0))
      : channels(c), height(h), width(w), data(static_cast<std::size_t>(c) * h * w, fill) {}

  std::size_t plane() const noexcept { return static_cast<std::size_t>(height) * width; }
  std::size_t size() const noexcept { return data.size(); }
  T& at(int c, int y, int x) noexcept { return data[(c * plane()) + y * width + x]; }
  T at(int c, int y, int x) const noexcept { return data[(c * plane()) + y * width + x]; }
};

template <class T>
FeatureMap<T> to_feature_map(const PixelImage& image) {
  FeatureMap<T> out(image.channels, image.height, image.width);
  for (std::size_t i = 0; i < image.values.size(); ++i) out.data[i] = static_cast<T>(image.values[i]);
  return out;
}

// A named trainable tensor.
template <class T>
struct Tensor {
  std::string name;
  std::vector<int> shape;
  std::vector<T> data;

  std::size_t numel() const noexcept {
    return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                           [](std::size_t a, int b) { return a * static_cast<std::size_t>(b); });
  }
  friend bool operator==(const Tensor&, const Tensor&) = default;
};

// Every trainable weight and bias of the backbone, in layer order
// (conv1.weight, conv1.bias, ..., fc9.weight, fc9.bias).
template <class T>
struct NetworkParams {
  std::vector<Tensor<T>> tensors;

  const Tensor<T>* find(std::string_view name) const {
    for (const auto& t : tensors) {
      if (t.name == name) return &t;
    }
    return nullptr;
  }
  Tensor<T>* find(std::string_view name) {
    for (auto& t : tensors) {
      if (t.name == name) return &t;
    }
    return nullptr;
  }

  // Same names and shapes, all values zero.
  NetworkParams zeros_like() const {
    NetworkParams out;
    for (const auto& t : tensors) out.tensors.push_back({t.name, t.shape, std::vector<T>(t.data.size(), T(0))});
    return out;
  }

  template <class U>
  NetworkParams<U> cast() const {
    NetworkParams<U> out;
    for (const auto& t : tensors) {
      out.tensors.push_back({t.name, t.shape, std::vector<U>(t.data.begin(), t.data.end())});
    }
    return out;
  }

  friend bool operator==(const NetworkParams&, const NetworkParams&) = default;
};

// Number of scalar trainable values.
template <class T>
std::size_t param_count(const NetworkParams<T>& params) {
  std::size_t n = 0;
  for (const auto& t : params.tensors) n += t.data.size();
  return n;
}

// FNV-1a over names, shapes and raw float32 bytes; identifies a parameter set
// so galleries can be tied to the weights that produced them.
std::uint64_t params_fingerprint(const NetworkParams<float>& params);

}  // namespace leafsiam

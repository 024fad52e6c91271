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

#include "leafsiam/backbone.hpp"

#include <cmath>

#include "leafsiam/error.hpp"
#include "leafsiam/random.hpp"

namespace leafsiam {

BackboneConfig BackboneConfig::reference() {
  BackboneConfig c;
  c.in_channels = 3;
  c.in_height = 128;
  c.in_width = 128;
  c.conv = {
      {64, 5, 1, 1, true, true, 0.0},
      {96, 3, 1, 2, false, false, 0.0},
      {128, 3, 1, 2, false, false, 0.0},
      {96, 3, 1, 2, true, true, 0.2},
      {64, 1, 1, 1, false, false, 0.2},
      {32, 1, 1, 1, false, true, 0.2},
  };
  c.fc = {
      {256, true, 0.5},
      {64, true, 0.0},
      {32, false, 0.0},
  };
  c.lrn = LrnParams{5, 1e-4, 0.75, 2.0};
  c.pool_kernel = 3;
  c.pool_stride = 2;
  return c;
}

namespace {

std::string conv_name(std::size_t i) { return "conv" + std::to_string(i + 1); }

[[noreturn]] void structural(const std::string& what) { throw Error(ErrorKind::kStructural, what); }

void expect_shape(const LayerShape& expected, int c, int h, int w) {
  if (expected.channels != c || expected.height != h || expected.width != w) {
    structural("layer " + expected.layer + " produced " + std::to_string(c) + "x" +
               std::to_string(h) + "x" + std::to_string(w) + ", expected " +
               std::to_string(expected.channels) + "x" + std::to_string(expected.height) + "x" +
               std::to_string(expected.width));
  }
}

template <class T>
void apply_mask(std::span<T> values, const std::vector<T>& mask) {
  for (std::size_t i = 0; i < values.size(); ++i) values[i] *= mask[i];
}

}  // namespace

template <class T>
Backbone<T>::Backbone(BackboneConfig config) : config_(std::move(config)) {
  if (config_.conv.empty() || config_.fc.empty()) {
    structural("backbone needs at least one conv and one fully connected block");
  }
  int c = config_.in_channels, h = config_.in_height, w = config_.in_width;
  if (c <= 0 || h <= 0 || w <= 0) structural("input shape must be positive");
  for (std::size_t i = 0; i < config_.conv.size(); ++i) {
    const auto& spec = config_.conv[i];
    ConvGeometry g{c, h, w, spec.out_channels, spec.kernel, spec.stride, spec.pad};
    if (spec.out_channels <= 0 || spec.kernel <= 0 || spec.stride <= 0 || g.out_height() <= 0 ||
        g.out_width() <= 0) {
      structural("layer " + conv_name(i) + " has an empty output");
    }
    geometry_.push_back(g);
    layout_.push_back({conv_name(i) + ".weight", {spec.out_channels, c, spec.kernel, spec.kernel}});
    layout_.push_back({conv_name(i) + ".bias", {spec.out_channels}});
    c = spec.out_channels;
    h = g.out_height();
    w = g.out_width();
    plan_.push_back({conv_name(i), c, h, w});
    if (spec.pool) {
      h = (h - config_.pool_kernel) / config_.pool_stride + 1;
      w = (w - config_.pool_kernel) / config_.pool_stride + 1;
      if (h <= 0 || w <= 0) structural("layer pool" + std::to_string(i + 1) + " has an empty output");
      plan_.push_back({"pool" + std::to_string(i + 1), c, h, w});
    }
  }
  flatten_size_ = static_cast<std::size_t>(c) * h * w;
  plan_.push_back({"flatten", static_cast<int>(flatten_size_), 1, 1});
  int in_features = static_cast<int>(flatten_size_);
  for (std::size_t j = 0; j < config_.fc.size(); ++j) {
    const auto name = "fc" + std::to_string(config_.conv.size() + j + 1);
    if (config_.fc[j].out_features <= 0) structural("layer " + name + " has no outputs");
    layout_.push_back({name + ".weight", {config_.fc[j].out_features, in_features}});
    layout_.push_back({name + ".bias", {config_.fc[j].out_features}});
    in_features = config_.fc[j].out_features;
  }
  for (const auto& [name, shape] : layout_) {
    std::size_t n = 1;
    for (int d : shape) n *= static_cast<std::size_t>(d);
    param_count_ += n;
  }
}

template <class T>
NetworkParams<T> Backbone<T>::zero_params() const {
  NetworkParams<T> p;
  for (const auto& [name, shape] : layout_) {
    Tensor<T> t{name, shape, {}};
    t.data.assign(t.numel(), T(0));
    p.tensors.push_back(std::move(t));
  }
  return p;
}

template <class T>
NetworkParams<T> Backbone<T>::init_params(std::uint64_t seed) const {
  NetworkParams<T> p = zero_params();
  Rng rng(seed);
  for (auto& t : p.tensors) {
    if (t.shape.size() < 2) continue;  // biases stay zero
    std::size_t fan_in = 1;
    for (std::size_t d = 1; d < t.shape.size(); ++d) fan_in *= static_cast<std::size_t>(t.shape[d]);
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in));
    for (auto& v : t.data) v = static_cast<T>(rng.uniform(-bound, bound));
  }
  return p;
}

template <class T>
void Backbone<T>::check_params(const NetworkParams<T>& params) const {
  if (params.tensors.size() != layout_.size()) {
    structural("parameter set has " + std::to_string(params.tensors.size()) + " tensors, expected " +
               std::to_string(layout_.size()));
  }
  for (std::size_t i = 0; i < layout_.size(); ++i) {
    const auto& t = params.tensors[i];
    if (t.name != layout_[i].first || t.shape != layout_[i].second || t.data.size() != t.numel()) {
      structural("parameter tensor " + layout_[i].first + " is missing or has the wrong shape");
    }
  }
}

template <class T>
std::vector<T> Backbone<T>::forward(const NetworkParams<T>& params, const FeatureMap<T>& input,
                                    Mode mode, std::uint64_t dropout_seed,
                                    ForwardTrace<T>* trace) const {
  check_params(params);
  if (input.channels != config_.in_channels || input.height != config_.in_height ||
      input.width != config_.in_width || input.size() != input.plane() * input.channels) {
    structural("input is " + std::to_string(input.channels) + "x" + std::to_string(input.height) +
               "x" + std::to_string(input.width) + ", backbone expects " +
               std::to_string(config_.in_channels) + "x" + std::to_string(config_.in_height) + "x" +
               std::to_string(config_.in_width));
  }
  const bool train = mode == Mode::kTrain;
  Rng rng(dropout_seed);
  if (trace != nullptr) {
    *trace = ForwardTrace<T>{};
    trace->mode = mode;
  }

  std::size_t plan_pos = 0;
  FeatureMap<T> x = input;
  for (std::size_t i = 0; i < config_.conv.size(); ++i) {
    const auto& spec = config_.conv[i];
    const auto& weight = params.tensors[2 * i].data;
    const auto& bias = params.tensors[2 * i + 1].data;
    ConvBlockTrace<T> bt;
    bt.geometry = geometry_[i];
    conv2d_forward<T>(x, weight, bias, bt.geometry, bt.activation, bt.columns);
    relu_forward<T>(bt.activation.data);
    expect_shape(plan_[plan_pos], bt.activation.channels, bt.activation.height, bt.activation.width);
    if (trace) trace->shapes.push_back(plan_[plan_pos]);
    ++plan_pos;

    FeatureMap<T> cur;
    if (spec.lrn) {
      lrn_forward<T>(bt.activation, config_.lrn, bt.lrn_output, bt.lrn_scale);
      cur = bt.lrn_output;
    } else {
      cur = bt.activation;
    }
    if (spec.pool) {
      bt.pool_in_height = cur.height;
      bt.pool_in_width = cur.width;
      FeatureMap<T> pooled;
      maxpool_forward<T>(cur, config_.pool_kernel, config_.pool_stride, pooled, bt.argmax);
      cur = std::move(pooled);
      expect_shape(plan_[plan_pos], cur.channels, cur.height, cur.width);
      if (trace) trace->shapes.push_back(plan_[plan_pos]);
      ++plan_pos;
    }
    if (train && spec.dropout > 0.0) {
      bt.dropout_mask = dropout_mask<T>(cur.size(), spec.dropout, rng);
      apply_mask<T>(cur.data, bt.dropout_mask);
    }
    x = std::move(cur);
    if (trace) trace->conv.push_back(std::move(bt));
  }

  std::vector<T> v = std::move(x.data);
  if (v.size() != flatten_size_) structural("flatten size mismatch");
  if (trace) trace->shapes.push_back(plan_[plan_pos]);

  const std::size_t fc_base = 2 * config_.conv.size();
  for (std::size_t j = 0; j < config_.fc.size(); ++j) {
    const auto& spec = config_.fc[j];
    const auto& weight = params.tensors[fc_base + 2 * j].data;
    const auto& bias = params.tensors[fc_base + 2 * j + 1].data;
    FcBlockTrace<T> ft;
    ft.activation.assign(static_cast<std::size_t>(spec.out_features), T(0));
    linear_forward<T>(weight, bias, v, ft.activation);
    if (spec.relu) relu_forward<T>(ft.activation);
    std::vector<T> out = ft.activation;
    if (train && spec.dropout > 0.0) {
      ft.dropout_mask = dropout_mask<T>(out.size(), spec.dropout, rng);
      apply_mask<T>(out, ft.dropout_mask);
    }
    if (trace) {
      ft.input = std::move(v);
      trace->fc.push_back(std::move(ft));
    }
    v = std::move(out);
  }
  if (trace) trace->embedding = v;
  return v;
}

template <class T>
void Backbone<T>::backward(const NetworkParams<T>& params, const ForwardTrace<T>& trace,
                           std::span<const T> grad_embedding, NetworkParams<T>& grads) const {
  check_params(params);
  check_params(grads);
  if (trace.conv.size() != config_.conv.size() || trace.fc.size() != config_.fc.size()) {
    structural("trace does not match the backbone layout");
  }
  if (grad_embedding.size() != static_cast<std::size_t>(config_.embedding_size())) {
    structural("output gradient has " + std::to_string(grad_embedding.size()) +
               " components, expected " + std::to_string(config_.embedding_size()));
  }

  std::vector<T> g(grad_embedding.begin(), grad_embedding.end());
  const std::size_t fc_base = 2 * config_.conv.size();
  for (std::size_t jj = config_.fc.size(); jj-- > 0;) {
    const auto& ft = trace.fc[jj];
    if (ft.activation.size() != g.size() ||
        ft.input.size() * g.size() != params.tensors[fc_base + 2 * jj].data.size()) {
      structural("trace of layer fc" + std::to_string(config_.conv.size() + jj + 1) +
                 " does not match the parameters");
    }
    if (!ft.dropout_mask.empty()) apply_mask<T>(g, ft.dropout_mask);
    if (config_.fc[jj].relu) relu_backward<T>(ft.activation, g);
    std::vector<T> gin(ft.input.size());
    auto& gw = grads.tensors[fc_base + 2 * jj].data;
    auto& gb = grads.tensors[fc_base + 2 * jj + 1].data;
    linear_backward<T>(params.tensors[fc_base + 2 * jj].data, ft.input, g, gw, gb, gin);
    g = std::move(gin);
  }

  const auto& last = plan_[plan_.size() - 2];
  FeatureMap<T> gmap(last.channels, last.height, last.width);
  if (g.size() != gmap.size()) structural("flatten gradient size mismatch");
  gmap.data = std::move(g);

  for (std::size_t ii = config_.conv.size(); ii-- > 0;) {
    const auto& spec = config_.conv[ii];
    const auto& bt = trace.conv[ii];
    if (bt.columns.size() !=
        static_cast<std::size_t>(geometry_[ii].patch_size()) * bt.activation.plane()) {
      structural("trace of layer " + conv_name(ii) + " does not match the parameters");
    }
    if (!bt.dropout_mask.empty()) apply_mask<T>(gmap.data, bt.dropout_mask);
    if (spec.pool) {
      FeatureMap<T> gpre;
      maxpool_backward<T>(bt.argmax, gmap, bt.pool_in_height, bt.pool_in_width, gpre);
      gmap = std::move(gpre);
    }
    if (spec.lrn) {
      FeatureMap<T> gpre;
      lrn_backward<T>(bt.activation, bt.lrn_output, bt.lrn_scale, gmap, config_.lrn, gpre);
      gmap = std::move(gpre);
    }
    relu_backward<T>(bt.activation.data, gmap.data);
    FeatureMap<T> gin;
    conv2d_backward<T>(bt.columns, params.tensors[2 * ii].data, gmap, bt.geometry,
                       grads.tensors[2 * ii].data, grads.tensors[2 * ii + 1].data,
                       ii == 0 ? nullptr : &gin);
    gmap = std::move(gin);
  }
}

template <class T>
NetworkParams<T> Backbone<T>::backward(const NetworkParams<T>& params, const ForwardTrace<T>& trace,
                                       std::span<const T> grad_embedding) const {
  NetworkParams<T> grads = zero_params();
  backward(params, trace, grad_embedding, grads);
  return grads;
}

template class Backbone<float>;
template class Backbone<double>;

}  // namespace leafsiam

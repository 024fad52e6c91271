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

#include "leafsiam/layers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Core>

#include "leafsiam/hash.hpp"

namespace leafsiam {

namespace {

template <class T>
using RowMatrix = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <class T>
using MapMatrix = Eigen::Map<RowMatrix<T>>;
template <class T>
using ConstMapMatrix = Eigen::Map<const RowMatrix<T>>;
template <class T>
using ConstMapVector = Eigen::Map<const Eigen::Matrix<T, Eigen::Dynamic, 1>>;

template <class T>
void im2col(const FeatureMap<T>& in, const ConvGeometry& g, std::vector<T>& cols) {
  const int oh = g.out_height(), ow = g.out_width();
  const std::size_t n = static_cast<std::size_t>(oh) * ow;
  cols.assign(static_cast<std::size_t>(g.patch_size()) * n, T(0));
  std::size_t row = 0;
  for (int c = 0; c < g.in_channels; ++c) {
    for (int ky = 0; ky < g.kernel; ++ky) {
      for (int kx = 0; kx < g.kernel; ++kx, ++row) {
        T* dst = cols.data() + row * n;
        for (int oy = 0; oy < oh; ++oy) {
          const int iy = oy * g.stride - g.pad + ky;
          if (iy < 0 || iy >= g.in_height) continue;
          const T* src = in.data.data() + c * in.plane() + static_cast<std::size_t>(iy) * g.in_width;
          T* out_row = dst + static_cast<std::size_t>(oy) * ow;
          for (int ox = 0; ox < ow; ++ox) {
            const int ix = ox * g.stride - g.pad + kx;
            if (ix >= 0 && ix < g.in_width) out_row[ox] = src[ix];
          }
        }
      }
    }
  }
}

template <class T>
void col2im(const RowMatrix<T>& cols, const ConvGeometry& g, FeatureMap<T>& out) {
  const int oh = g.out_height(), ow = g.out_width();
  out = FeatureMap<T>(g.in_channels, g.in_height, g.in_width);
  std::size_t row = 0;
  for (int c = 0; c < g.in_channels; ++c) {
    for (int ky = 0; ky < g.kernel; ++ky) {
      for (int kx = 0; kx < g.kernel; ++kx, ++row) {
        const T* src = cols.data() + row * static_cast<std::size_t>(oh) * ow;
        for (int oy = 0; oy < oh; ++oy) {
          const int iy = oy * g.stride - g.pad + ky;
          if (iy < 0 || iy >= g.in_height) continue;
          T* dst = out.data.data() + c * out.plane() + static_cast<std::size_t>(iy) * g.in_width;
          const T* in_row = src + static_cast<std::size_t>(oy) * ow;
          for (int ox = 0; ox < ow; ++ox) {
            const int ix = ox * g.stride - g.pad + kx;
            if (ix >= 0 && ix < g.in_width) dst[ix] += in_row[ox];
          }
        }
      }
    }
  }
}

// scale^-beta, with a sqrt-based path for the common beta = 0.75.
template <class T>
void inverse_power(const std::vector<T>& scale, double beta, std::vector<T>& out) {
  out.resize(scale.size());
  if (beta == 0.75) {
    for (std::size_t i = 0; i < scale.size(); ++i) {
      const T r = std::sqrt(scale[i]);
      out[i] = T(1) / (r * std::sqrt(r));
    }
  } else {
    const T neg_beta = static_cast<T>(-beta);
    for (std::size_t i = 0; i < scale.size(); ++i) out[i] = std::pow(scale[i], neg_beta);
  }
}

// Fixed eight-lane summation order. Eigen's reductions peel according to the
// runtime address of the operands, which made results depend on the heap.
template <class T>
T lane_dot(const T* a, const T* b, std::size_t n) {
  T acc[8] = {};
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    for (int k = 0; k < 8; ++k) acc[k] += a[i + k] * b[i + k];
  }
  for (int k = 0; i < n; ++i, ++k) acc[k] += a[i] * b[i];
  return ((acc[0] + acc[4]) + (acc[1] + acc[5])) + ((acc[2] + acc[6]) + (acc[3] + acc[7]));
}

template <class T>
T lane_sum(const T* a, std::size_t n) {
  T acc[8] = {};
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    for (int k = 0; k < 8; ++k) acc[k] += a[i + k];
  }
  for (int k = 0; i < n; ++i, ++k) acc[k] += a[i];
  return ((acc[0] + acc[4]) + (acc[1] + acc[5])) + ((acc[2] + acc[6]) + (acc[3] + acc[7]));
}

}  // namespace

template <class T>
void conv2d_forward(const FeatureMap<T>& input, std::span<const T> weight, std::span<const T> bias,
                    const ConvGeometry& geom, FeatureMap<T>& output, std::vector<T>& columns) {
  im2col(input, geom, columns);
  const int oh = geom.out_height(), ow = geom.out_width();
  const Eigen::Index n = static_cast<Eigen::Index>(oh) * ow;
  output = FeatureMap<T>(geom.out_channels, oh, ow);
  ConstMapMatrix<T> w(weight.data(), geom.out_channels, geom.patch_size());
  ConstMapMatrix<T> cols(columns.data(), geom.patch_size(), n);
  MapMatrix<T> out(output.data.data(), geom.out_channels, n);
  out.noalias() = w * cols;
  out.colwise() += ConstMapVector<T>(bias.data(), geom.out_channels);
}

template <class T>
void conv2d_backward(const std::vector<T>& columns, std::span<const T> weight,
                     const FeatureMap<T>& grad_output, const ConvGeometry& geom,
                     std::span<T> grad_weight, std::span<T> grad_bias, FeatureMap<T>* grad_input) {
  const Eigen::Index n = static_cast<Eigen::Index>(geom.out_height()) * geom.out_width();
  ConstMapMatrix<T> gout(grad_output.data.data(), geom.out_channels, n);
  ConstMapMatrix<T> cols(columns.data(), geom.patch_size(), n);
  MapMatrix<T> gw(grad_weight.data(), geom.out_channels, geom.patch_size());
  gw.noalias() += gout * cols.transpose();
  for (int o = 0; o < geom.out_channels; ++o) {
    grad_bias[o] += lane_sum(grad_output.data.data() + static_cast<std::size_t>(o) * n, static_cast<std::size_t>(n));
  }
  if (grad_input != nullptr) {
    ConstMapMatrix<T> w(weight.data(), geom.out_channels, geom.patch_size());
    RowMatrix<T> gcols = w.transpose() * gout;
    col2im(gcols, geom, *grad_input);
  }
}

template <class T>
void relu_forward(std::span<T> values) {
  for (T& v : values) v = v > T(0) ? v : T(0);
}

template <class T>
void relu_backward(std::span<const T> output, std::span<T> grad) {
  for (std::size_t i = 0; i < grad.size(); ++i) {
    if (!(output[i] > T(0))) grad[i] = T(0);
  }
}

template <class T>
void lrn_forward(const FeatureMap<T>& input, const LrnParams& p, FeatureMap<T>& output,
                 std::vector<T>& scale) {
  const int channels = input.channels;
  const std::size_t plane = input.plane();
  const int half = p.size / 2;
  const T coeff = static_cast<T>(p.alpha / p.size);
  output = FeatureMap<T>(channels, input.height, input.width);
  scale.assign(input.size(), static_cast<T>(p.k));

  std::vector<T> squares(input.size());
  for (std::size_t i = 0; i < input.size(); ++i) squares[i] = input.data[i] * input.data[i];
  for (int c = 0; c < channels; ++c) {
    T* s = scale.data() + c * plane;
    const int lo = std::max(0, c - half), hi = std::min(channels - 1, c + half);
    for (int cc = lo; cc <= hi; ++cc) {
      const T* sq = squares.data() + cc * plane;
      for (std::size_t i = 0; i < plane; ++i) s[i] += coeff * sq[i];
    }
  }
  std::vector<T> inv;
  inverse_power(scale, p.beta, inv);
  for (std::size_t i = 0; i < input.size(); ++i) output.data[i] = input.data[i] * inv[i];
}

template <class T>
void lrn_backward(const FeatureMap<T>& input, const FeatureMap<T>& output,
                  const std::vector<T>& scale, const FeatureMap<T>& grad_output,
                  const LrnParams& p, FeatureMap<T>& grad_input) {
  const int channels = input.channels;
  const std::size_t plane = input.plane();
  const int half = p.size / 2;
  const T cross = static_cast<T>(2.0 * p.alpha * p.beta / p.size);
  grad_input = FeatureMap<T>(channels, input.height, input.width);

  // ratio_c = g_c * b_c / scale_c; the window is symmetric, so channel c
  // receives the windowed sum of ratio around c.
  std::vector<T> ratio(input.size());
  for (std::size_t i = 0; i < input.size(); ++i) {
    ratio[i] = grad_output.data[i] * output.data[i] / scale[i];
  }
  std::vector<T> inv;
  inverse_power(scale, p.beta, inv);
  std::vector<T> acc(plane);
  for (int c = 0; c < channels; ++c) {
    std::fill(acc.begin(), acc.end(), T(0));
    const int lo = std::max(0, c - half), hi = std::min(channels - 1, c + half);
    for (int cc = lo; cc <= hi; ++cc) {
      const T* r = ratio.data() + cc * plane;
      for (std::size_t i = 0; i < plane; ++i) acc[i] += r[i];
    }
    const std::size_t base = c * plane;
    for (std::size_t i = 0; i < plane; ++i) {
      const std::size_t j = base + i;
      grad_input.data[j] = grad_output.data[j] * inv[j] -
                           cross * input.data[j] * acc[i];
    }
  }
}

template <class T>
void maxpool_forward(const FeatureMap<T>& input, int kernel, int stride, FeatureMap<T>& output,
                     std::vector<std::int32_t>& argmax) {
  const int oh = (input.height - kernel) / stride + 1;
  const int ow = (input.width - kernel) / stride + 1;
  output = FeatureMap<T>(input.channels, oh, ow);
  argmax.assign(output.size(), 0);
  std::size_t o = 0;
  for (int c = 0; c < input.channels; ++c) {
    const T* plane = input.data.data() + c * input.plane();
    for (int oy = 0; oy < oh; ++oy) {
      for (int ox = 0; ox < ow; ++ox, ++o) {
        T best = -std::numeric_limits<T>::infinity();
        std::int32_t best_idx = 0;
        for (int ky = 0; ky < kernel; ++ky) {
          for (int kx = 0; kx < kernel; ++kx) {
            const std::int32_t idx = (oy * stride + ky) * input.width + ox * stride + kx;
            if (plane[idx] > best) {
              best = plane[idx];
              best_idx = idx;
            }
          }
        }
        output.data[o] = best;
        argmax[o] = best_idx;
      }
    }
  }
}

template <class T>
void maxpool_backward(const std::vector<std::int32_t>& argmax, const FeatureMap<T>& grad_output,
                      int in_height, int in_width, FeatureMap<T>& grad_input) {
  grad_input = FeatureMap<T>(grad_output.channels, in_height, in_width);
  const std::size_t out_plane = grad_output.plane();
  for (int c = 0; c < grad_output.channels; ++c) {
    T* dst = grad_input.data.data() + c * grad_input.plane();
    for (std::size_t i = 0; i < out_plane; ++i) {
      const std::size_t o = c * out_plane + i;
      dst[argmax[o]] += grad_output.data[o];
    }
  }
}

template <class T>
std::vector<T> dropout_mask(std::size_t n, double p, Rng& rng) {
  std::vector<T> mask(n);
  const T keep_scale = static_cast<T>(1.0 / (1.0 - p));
  for (auto& m : mask) m = rng.uniform01() < p ? T(0) : keep_scale;
  return mask;
}

template <class T>
void linear_forward(std::span<const T> weight, std::span<const T> bias, std::span<const T> input,
                    std::span<T> output) {
  const std::size_t in_n = input.size();
  for (std::size_t o = 0; o < output.size(); ++o) {
    output[o] = lane_dot(weight.data() + o * in_n, input.data(), in_n) + bias[o];
  }
}

template <class T>
void linear_backward(std::span<const T> weight, std::span<const T> input,
                     std::span<const T> grad_output, std::span<T> grad_weight,
                     std::span<T> grad_bias, std::span<T> grad_input) {
  const std::size_t out_n = grad_output.size();
  const std::size_t in_n = input.size();
  for (std::size_t o = 0; o < out_n; ++o) {
    const T g = grad_output[o];
    T* gw = grad_weight.data() + o * in_n;
    for (std::size_t i = 0; i < in_n; ++i) gw[i] += g * input[i];
    grad_bias[o] += g;
  }
  if (!grad_input.empty()) {
    std::fill(grad_input.begin(), grad_input.end(), T(0));
    for (std::size_t o = 0; o < out_n; ++o) {
      const T g = grad_output[o];
      const T* w = weight.data() + o * in_n;
      for (std::size_t i = 0; i < in_n; ++i) grad_input[i] += g * w[i];
    }
  }
}

std::uint64_t params_fingerprint(const NetworkParams<float>& params) {
  Fnv1a h;
  for (const auto& t : params.tensors) {
    h.update(t.name);
    for (int d : t.shape) h.update(std::as_bytes(std::span(&d, 1)));
    h.update(std::as_bytes(std::span(t.data)));
  }
  return h.digest();
}

#define LEAFSIAM_INSTANTIATE_LAYERS(T)                                                           \
  template void conv2d_forward<T>(const FeatureMap<T>&, std::span<const T>, std::span<const T>, \
                                  const ConvGeometry&, FeatureMap<T>&, std::vector<T>&);        \
  template void conv2d_backward<T>(const std::vector<T>&, std::span<const T>,                   \
                                   const FeatureMap<T>&, const ConvGeometry&, std::span<T>,     \
                                   std::span<T>, FeatureMap<T>*);                               \
  template void relu_forward<T>(std::span<T>);                                                  \
  template void relu_backward<T>(std::span<const T>, std::span<T>);                             \
  template void lrn_forward<T>(const FeatureMap<T>&, const LrnParams&, FeatureMap<T>&,          \
                               std::vector<T>&);                                                \
  template void lrn_backward<T>(const FeatureMap<T>&, const FeatureMap<T>&,                     \
                                const std::vector<T>&, const FeatureMap<T>&, const LrnParams&,  \
                                FeatureMap<T>&);                                                \
  template void maxpool_forward<T>(const FeatureMap<T>&, int, int, FeatureMap<T>&,              \
                                   std::vector<std::int32_t>&);                                 \
  template void maxpool_backward<T>(const std::vector<std::int32_t>&, const FeatureMap<T>&, int, \
                                    int, FeatureMap<T>&);                                       \
  template std::vector<T> dropout_mask<T>(std::size_t, double, Rng&);                           \
  template void linear_forward<T>(std::span<const T>, std::span<const T>, std::span<const T>,   \
                                  std::span<T>);                                                \
  template void linear_backward<T>(std::span<const T>, std::span<const T>, std::span<const T>,  \
                                   std::span<T>, std::span<T>, std::span<T>);

LEAFSIAM_INSTANTIATE_LAYERS(float)
LEAFSIAM_INSTANTIATE_LAYERS(double)

}  // namespace leafsiam

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


#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "leafsiam/layers.hpp"
#include "leafsiam_testing.hpp"

namespace leafsiam {
namespace {

using testing::finite_difference;
using testing::random_map;
using testing::random_vector;

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

// Direct seven-loop convolution.
FeatureMap<double> naive_conv(const FeatureMap<double>& in, const std::vector<double>& w,
                              const std::vector<double>& b, const ConvGeometry& g) {
  FeatureMap<double> out(g.out_channels, g.out_height(), g.out_width());
  for (int o = 0; o < g.out_channels; ++o)
    for (int y = 0; y < out.height; ++y)
      for (int x = 0; x < out.width; ++x) {
        double acc = b[o];
        for (int c = 0; c < g.in_channels; ++c)
          for (int ky = 0; ky < g.kernel; ++ky)
            for (int kx = 0; kx < g.kernel; ++kx) {
              const int iy = y * g.stride - g.pad + ky, ix = x * g.stride - g.pad + kx;
              if (iy < 0 || ix < 0 || iy >= in.height || ix >= in.width) continue;
              acc += w[((o * g.in_channels + c) * g.kernel + ky) * g.kernel + kx] * in.at(c, iy, ix);
            }
        out.at(o, y, x) = acc;
      }
  return out;
}

FeatureMap<double> naive_lrn(const FeatureMap<double>& in, const LrnParams& p) {
  FeatureMap<double> out(in.channels, in.height, in.width);
  const int half = p.size / 2;
  for (int c = 0; c < in.channels; ++c)
    for (int y = 0; y < in.height; ++y)
      for (int x = 0; x < in.width; ++x) {
        double s = 0.0;
        for (int j = std::max(0, c - half); j <= std::min(in.channels - 1, c + half); ++j)
          s += in.at(j, y, x) * in.at(j, y, x);
        out.at(c, y, x) = in.at(c, y, x) / std::pow(p.k + p.alpha / p.size * s, p.beta);
      }
  return out;
}

TEST(Conv, MatchesNaiveLoops) {
  for (const ConvGeometry g : {ConvGeometry{3, 9, 9, 4, 5, 1, 1}, ConvGeometry{2, 6, 7, 3, 3, 1, 2},
                               ConvGeometry{4, 5, 5, 2, 1, 1, 1}, ConvGeometry{2, 8, 8, 3, 3, 2, 1}}) {
    const auto in = random_map<double>(g.in_channels, g.in_height, g.in_width, 1, -1, 1);
    const auto w = random_vector<double>(static_cast<std::size_t>(g.out_channels) * g.patch_size(), 2);
    const auto b = random_vector<double>(g.out_channels, 3);
    FeatureMap<double> out;
    std::vector<double> cols;
    conv2d_forward<double>(in, w, b, g, out, cols);
    const auto ref = naive_conv(in, w, b, g);
    ASSERT_EQ(out.height, ref.height);
    ASSERT_EQ(out.width, ref.width);
    for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(out.data[i], ref.data[i], 1e-12);
  }
}

TEST(Conv, OutputSizes) {
  EXPECT_EQ((ConvGeometry{3, 128, 128, 64, 5, 1, 1}.out_height()), 126);
  EXPECT_EQ((ConvGeometry{64, 62, 62, 64, 3, 1, 2}.out_height()), 64);
  EXPECT_EQ((ConvGeometry{64, 33, 33, 32, 1, 1, 1}.out_width()), 35);
}

TEST(Conv, GradientsMatchFiniteDifferences) {
  const ConvGeometry g{2, 6, 5, 3, 3, 1, 2};
  auto in = random_map<double>(2, 6, 5, 4, -1, 1);
  auto w = random_vector<double>(3 * g.patch_size(), 5);
  auto b = random_vector<double>(3, 6);
  const auto r = random_vector<double>(3 * g.out_height() * g.out_width(), 7);
  auto loss = [&] {
    FeatureMap<double> out;
    std::vector<double> cols;
    conv2d_forward<double>(in, w, b, g, out, cols);
    return dot(out.data, r);
  };
  FeatureMap<double> out, gin;
  std::vector<double> cols;
  conv2d_forward<double>(in, w, b, g, out, cols);
  FeatureMap<double> gout(3, g.out_height(), g.out_width());
  gout.data = r;
  std::vector<double> gw(w.size(), 0.0), gb(b.size(), 0.0);
  conv2d_backward<double>(cols, w, gout, g, gw, gb, &gin);
  for (auto check : {finite_difference(in.data, gin.data, loss), finite_difference(w, gw, loss),
                     finite_difference(b, gb, loss)}) {
    EXPECT_EQ(check.within_tolerance, check.checked);
    EXPECT_LE(check.worst, 1e-6);
  }
}

TEST(Conv, BackwardAccumulates) {
  const ConvGeometry g{1, 4, 4, 2, 3, 1, 1};
  const auto in = random_map<double>(1, 4, 4, 1);
  const auto w = random_vector<double>(2 * 9, 2);
  const std::vector<double> b(2, 0.0);
  FeatureMap<double> out;
  std::vector<double> cols;
  conv2d_forward<double>(in, w, b, g, out, cols);
  FeatureMap<double> gout(2, 4, 4, 1.0);
  std::vector<double> gw1(w.size(), 0.0), gb1(2, 0.0), gw2(w.size(), 0.0), gb2(2, 0.0);
  conv2d_backward<double>(cols, w, gout, g, gw1, gb1, nullptr);
  conv2d_backward<double>(cols, w, gout, g, gw2, gb2, nullptr);
  conv2d_backward<double>(cols, w, gout, g, gw2, gb2, nullptr);
  for (std::size_t i = 0; i < gw1.size(); ++i) EXPECT_NEAR(gw2[i], 2 * gw1[i], 1e-12);
  EXPECT_DOUBLE_EQ(gb1[0], 16.0);
}

TEST(Relu, ForwardAndBackward) {
  std::vector<double> v{-2.0, -0.0, 0.0, 0.5, 3.0};
  relu_forward<double>(v);
  EXPECT_EQ(v, (std::vector<double>{0.0, 0.0, 0.0, 0.5, 3.0}));
  std::vector<double> g{1, 1, 1, 1, 1};
  relu_backward<double>(v, g);
  EXPECT_EQ(g, (std::vector<double>{0, 0, 0, 1, 1}));
}

TEST(Lrn, SingleActivationClosedForm) {
  FeatureMap<double> in(5, 1, 1);
  in.data[2] = 1.0;
  FeatureMap<double> out;
  std::vector<double> scale;
  lrn_forward(in, LrnParams{}, out, scale);
  EXPECT_NEAR(out.data[2], 1.0 / std::pow(2.00002, 0.75), 1e-15);
  EXPECT_EQ(out.data[0], 0.0);
}

TEST(Lrn, MatchesNaiveLoops) {
  for (const LrnParams p : {LrnParams{}, LrnParams{5, 1.0, 0.75, 1.0}, LrnParams{3, 0.5, 0.5, 1.5}}) {
    const auto in = random_map<double>(9, 4, 3, 8, -3, 3);
    FeatureMap<double> out;
    std::vector<double> scale;
    lrn_forward(in, p, out, scale);
    const auto ref = naive_lrn(in, p);
    for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(out.data[i], ref.data[i], 1e-12);
  }
  // float path against the double oracle
  const auto in = random_map<double>(64, 5, 5, 9, 0, 4);
  FeatureMap<float> in_f(64, 5, 5), out_f;
  std::copy(in.data.begin(), in.data.end(), in_f.data.begin());
  std::vector<float> scale_f;
  lrn_forward(in_f, LrnParams{}, out_f, scale_f);
  const auto ref = naive_lrn(in, LrnParams{});
  for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(out_f.data[i], ref.data[i], 1e-6);
}

TEST(Lrn, ZeroInZeroOutAndMagnitudeBound) {
  FeatureMap<double> zero(6, 3, 3), out;
  std::vector<double> scale;
  lrn_forward(zero, LrnParams{}, out, scale);
  for (double v : out.data) EXPECT_EQ(v, 0.0);
  const auto in = random_map<double>(6, 3, 3, 2, -10, 10);
  lrn_forward(in, LrnParams{}, out, scale);
  for (std::size_t i = 0; i < in.size(); ++i) {
    // k^beta > 1 shrinks every activation and keeps its sign
    EXPECT_LE(std::abs(out.data[i]), std::abs(in.data[i]) / std::pow(2.0, 0.75) + 1e-15);
    EXPECT_GE(out.data[i] * in.data[i], 0.0);
  }
}

TEST(Lrn, GradientsMatchFiniteDifferences) {
  for (const LrnParams p : {LrnParams{}, LrnParams{5, 2.0, 0.75, 1.0}, LrnParams{3, 1.0, 0.6, 0.5}}) {
    auto in = random_map<double>(7, 3, 2, 10, -2, 2);
    const auto r = random_vector<double>(in.size(), 11);
    auto loss = [&] {
      FeatureMap<double> out;
      std::vector<double> scale;
      lrn_forward(in, p, out, scale);
      return dot(out.data, r);
    };
    FeatureMap<double> out, gin;
    std::vector<double> scale;
    lrn_forward(in, p, out, scale);
    FeatureMap<double> gout(7, 3, 2);
    gout.data = r;
    lrn_backward(in, out, scale, gout, p, gin);
    // Strong alpha makes the third derivative large; a short step keeps the
    // central difference truncation below the tolerance.
    const auto check = finite_difference(in.data, gin.data, loss, 1e-5);
    EXPECT_EQ(check.within_tolerance, check.checked);
    EXPECT_LE(check.worst, 1e-5);
  }
}

TEST(MaxPool, ForwardPicksWindowMaximum) {
  FeatureMap<double> in(1, 5, 5);
  std::iota(in.data.begin(), in.data.end(), 0.0);
  FeatureMap<double> out;
  std::vector<std::int32_t> argmax;
  maxpool_forward(in, 3, 2, out, argmax);
  ASSERT_EQ(out.height, 2);
  EXPECT_EQ(out.data, (std::vector<double>{12, 14, 22, 24}));
  EXPECT_EQ(argmax, (std::vector<std::int32_t>{12, 14, 22, 24}));
  FeatureMap<double> in66(2, 66, 68);
  maxpool_forward(in66, 3, 2, out, argmax);
  EXPECT_EQ(out.height, 32);
  EXPECT_EQ(out.width, 33);
}

TEST(MaxPool, GradientsMatchFiniteDifferences) {
  // well-separated values so no perturbation changes the argmax
  FeatureMap<double> in(2, 7, 6);
  std::vector<double> levels(in.size());
  std::iota(levels.begin(), levels.end(), 0.0);
  Rng rng(3);
  rng.shuffle(std::span(levels));
  for (std::size_t i = 0; i < in.size(); ++i) in.data[i] = 0.01 * levels[i];
  FeatureMap<double> out, gin;
  std::vector<std::int32_t> argmax;
  maxpool_forward(in, 3, 2, out, argmax);
  const auto r = random_vector<double>(out.size(), 4);
  auto loss = [&] {
    FeatureMap<double> o;
    std::vector<std::int32_t> a;
    maxpool_forward(in, 3, 2, o, a);
    return dot(o.data, r);
  };
  FeatureMap<double> gout(out.channels, out.height, out.width);
  gout.data = r;
  maxpool_backward(argmax, gout, 7, 6, gin);
  const auto check = finite_difference(in.data, gin.data, loss);
  EXPECT_EQ(check.within_tolerance, check.checked);
}

TEST(Dropout, MaskStatistics) {
  Rng rng(42);
  const auto mask = dropout_mask<double>(200000, 0.2, rng);
  std::size_t zeros = 0;
  for (double m : mask) {
    if (m == 0.0) {
      ++zeros;
    } else {
      EXPECT_DOUBLE_EQ(m, 1.25);
    }
  }
  EXPECT_NEAR(static_cast<double>(zeros) / mask.size(), 0.2, 0.005);
  const double mean = std::accumulate(mask.begin(), mask.end(), 0.0) / mask.size();
  EXPECT_NEAR(mean, 1.0, 0.01);
  Rng a(1), b(1);
  EXPECT_EQ(dropout_mask<float>(100, 0.5, a), dropout_mask<float>(100, 0.5, b));
}

TEST(Linear, ForwardMatchesLoopAndGradients) {
  const int in_n = 7, out_n = 4;
  auto x = random_vector<double>(in_n, 1);
  auto w = random_vector<double>(in_n * out_n, 2);
  auto b = random_vector<double>(out_n, 3);
  std::vector<double> y(out_n);
  linear_forward<double>(w, b, x, y);
  for (int o = 0; o < out_n; ++o) {
    double acc = b[o];
    for (int i = 0; i < in_n; ++i) acc += w[o * in_n + i] * x[i];
    EXPECT_NEAR(y[o], acc, 1e-14);
  }
  const auto r = random_vector<double>(out_n, 4);
  auto loss = [&] {
    std::vector<double> out(out_n);
    linear_forward<double>(w, b, x, out);
    return dot(out, r);
  };
  std::vector<double> gw(w.size(), 0.0), gb(out_n, 0.0), gx(in_n, 0.0);
  linear_backward<double>(w, x, r, gw, gb, gx);
  for (auto check : {finite_difference(x, gx, loss), finite_difference(w, gw, loss), finite_difference(b, gb, loss)}) {
    EXPECT_EQ(check.within_tolerance, check.checked);
  }
}

}  // namespace
}  // namespace leafsiam

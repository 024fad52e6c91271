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

#include "leafsiam/error.hpp"
#include "leafsiam/optimizer.hpp"
#include "leafsiam_testing.hpp"

namespace leafsiam {
namespace {

NetworkParams<double> make_params(std::uint64_t seed) {
  NetworkParams<double> p;
  p.tensors.push_back({"a", {2, 3}, testing::random_vector<double>(6, seed)});
  p.tensors.push_back({"b", {4}, testing::random_vector<double>(4, seed + 1)});
  return p;
}

TEST(Adam, ZeroGradientWithoutDecayIsFixedPoint) {
  auto params = make_params(1);
  const auto before = params;
  AdamState<double> state;
  AdamOptions opt;
  opt.weight_decay = 0.0;
  for (int i = 0; i < 5; ++i) adam_step(params, params.zeros_like(), state, opt);
  EXPECT_EQ(params, before);
  EXPECT_EQ(state.step, 5);
}

TEST(Adam, ZeroParamsAndGradientStayZero) {
  auto params = make_params(1).zeros_like();
  AdamState<double> state;
  adam_step(params, params.zeros_like(), state, AdamOptions{});
  for (const auto& t : params.tensors)
    for (double v : t.data) EXPECT_EQ(v, 0.0);
}

TEST(Adam, FirstStepClosedForm) {
  auto params = make_params(3);
  const auto before = params;
  const auto grads = make_params(9);
  AdamOptions opt;
  AdamState<double> state;
  adam_step(params, grads, state, opt);
  for (std::size_t t = 0; t < params.tensors.size(); ++t) {
    for (std::size_t k = 0; k < params.tensors[t].data.size(); ++k) {
      const double g = grads.tensors[t].data[k] + opt.weight_decay * before.tensors[t].data[k];
      // bias-corrected moments equal g and g^2 after one step
      const double expected = before.tensors[t].data[k] - opt.learning_rate * g / (std::abs(g) + opt.eps);
      EXPECT_NEAR(params.tensors[t].data[k], expected, 1e-9);
    }
  }
}

TEST(Adam, TwoStepRecurrence) {
  auto params = make_params(4);
  auto p = params.tensors[0].data;
  const auto g1 = make_params(10), g2 = make_params(20);
  AdamOptions opt;
  opt.learning_rate = 0.01;
  opt.weight_decay = 0.05;
  AdamState<double> state;
  adam_step(params, g1, state, opt);
  adam_step(params, g2, state, opt);
  std::vector<double> m(p.size(), 0.0), v(p.size(), 0.0);
  for (int t = 1; t <= 2; ++t) {
    const auto& g = (t == 1 ? g1 : g2).tensors[0].data;
    for (std::size_t k = 0; k < p.size(); ++k) {
      const double gk = g[k] + opt.weight_decay * p[k];
      m[k] = opt.beta1 * m[k] + (1 - opt.beta1) * gk;
      v[k] = opt.beta2 * v[k] + (1 - opt.beta2) * gk * gk;
      const double mh = m[k] / (1 - std::pow(opt.beta1, t));
      const double vh = v[k] / (1 - std::pow(opt.beta2, t));
      p[k] -= opt.learning_rate * mh / (std::sqrt(vh) + opt.eps);
    }
  }
  for (std::size_t k = 0; k < p.size(); ++k) EXPECT_NEAR(params.tensors[0].data[k], p[k], 1e-12);
}

TEST(Adam, FloatAgreesWithDouble) {
  auto pd = make_params(7);
  auto pf = pd.cast<float>();
  const auto gd = make_params(8);
  const auto gf = gd.cast<float>();
  AdamState<double> sd;
  AdamState<float> sf;
  for (int i = 0; i < 3; ++i) {
    adam_step(pd, gd, sd, AdamOptions{});
    adam_step(pf, gf, sf, AdamOptions{});
  }
  for (std::size_t k = 0; k < pd.tensors[0].data.size(); ++k)
    EXPECT_NEAR(pf.tensors[0].data[k], pd.tensors[0].data[k], 1e-5);
}

TEST(Adam, ShapeMismatchRaises) {
  auto params = make_params(1);
  auto grads = params.zeros_like();
  grads.tensors[1].data.pop_back();
  AdamState<double> state;
  try {
    adam_step(params, grads, state, AdamOptions{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kStructural);
  }
  grads.tensors.pop_back();
  EXPECT_THROW(adam_step(params, grads, state, AdamOptions{}), Error);
}

}  // namespace
}  // namespace leafsiam

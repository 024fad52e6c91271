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

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "leafsiam/backbone.hpp"
#include "leafsiam/image.hpp"
#include "leafsiam/manifest.hpp"
#include "leafsiam/random.hpp"
#include "leafsiam/voting.hpp"

namespace leafsiam::testing {

// Unique scratch directory, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "t") {
    static std::atomic<int> counter{0};
    const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    path_ = std::filesystem::temp_directory_path() /
            ("leafsiam_" + tag + "_" + std::to_string(stamp) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// Same block structure as the reference network, shrunk to `side` x `side`
// inputs with a handful of channels.
inline BackboneConfig tiny_backbone_config(int channels = 2, int side = 8) {
  BackboneConfig c = BackboneConfig::reference();
  c.in_channels = channels;
  c.in_height = side;
  c.in_width = side;
  c.conv = {
      {3, 5, 1, 1, true, true, 0.0},  {4, 3, 1, 2, false, false, 0.0},
      {3, 3, 1, 2, false, false, 0.0}, {4, 3, 1, 2, true, true, 0.2},
      {3, 1, 1, 1, false, false, 0.2}, {2, 1, 1, 1, false, true, 0.2},
  };
  c.fc = {{6, true, 0.5}, {5, true, 0.0}, {4, false, 0.0}};
  return c;
}

template <class T>
FeatureMap<T> random_map(int c, int h, int w, std::uint64_t seed, double lo = 0.0, double hi = 1.0) {
  Rng rng(seed);
  FeatureMap<T> m(c, h, w);
  for (auto& v : m.data) v = static_cast<T>(rng.uniform(lo, hi));
  return m;
}

inline PixelImage random_pixel_image(int h, int w, std::uint64_t seed) {
  Rng rng(seed);
  PixelImage img(3, h, w);
  for (auto& v : img.values) v = static_cast<float>(rng.uniform01());
  return img;
}

template <class T>
std::vector<T> random_vector(std::size_t n, std::uint64_t seed, double lo = -1.0, double hi = 1.0) {
  Rng rng(seed);
  std::vector<T> v(n);
  for (auto& x : v) x = static_cast<T>(rng.uniform(lo, hi));
  return v;
}

struct GradCheck {
  std::size_t checked = 0;
  std::size_t within_tolerance = 0;
  double worst = 0.0;

  double fraction_within() const {
    return checked == 0 ? 1.0 : static_cast<double>(within_tolerance) / static_cast<double>(checked);
  }
  void merge(const GradCheck& o) {
    checked += o.checked;
    within_tolerance += o.within_tolerance;
    worst = std::max(worst, o.worst);
  }
};

// |a - n| / max(|a|, |n|, floor); the floor keeps exact-zero gradients from
// dividing by zero.
inline double relative_error(double analytic, double numeric, double floor = 1e-7) {
  return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), floor});
}

// Central differences of `loss` with respect to every (or every `stride`-th)
// entry of `x`, compared against `analytic`.
template <class F>
GradCheck finite_difference(std::vector<double>& x, const std::vector<double>& analytic, F&& loss,
                            double h = 1e-3, double tol = 1e-4, std::size_t stride = 1) {
  GradCheck out;
  for (std::size_t i = 0; i < x.size(); i += stride) {
    const double saved = x[i];
    x[i] = saved + h;
    const double up = loss();
    x[i] = saved - h;
    const double down = loss();
    x[i] = saved;
    const double numeric = (up - down) / (2.0 * h);
    const double err = relative_error(analytic[i], numeric);
    ++out.checked;
    if (err <= tol) ++out.within_tolerance;
    out.worst = std::max(out.worst, err);
  }
  return out;
}

template <class F>
GradCheck finite_difference(NetworkParams<double>& params, const NetworkParams<double>& analytic,
                            F&& loss, double h = 1e-3, double tol = 1e-4, std::size_t stride = 1) {
  GradCheck out;
  for (std::size_t t = 0; t < params.tensors.size(); ++t) {
    out.merge(finite_difference(params.tensors[t].data, analytic.tensors[t].data, loss, h, tol, stride));
  }
  return out;
}

// Reads the file and shrinks it to `side` x `side` for tiny backbones.
inline ImageLoader downscaled_loader(int side) {
  return [side](const Sample& s) { return resize_bilinear(load_image(s.path), side, side); };
}

// A manifest with fake paths and the given class sizes.
inline DatasetManifest fake_manifest(const std::vector<int>& counts) {
  std::vector<std::string> classes;
  std::vector<Sample> samples;
  for (std::size_t c = 0; c < counts.size(); ++c) {
    classes.push_back("c" + std::to_string(c));
    for (int i = 0; i < counts[c]; ++i) {
      samples.push_back({"/fake/c" + std::to_string(c) + "/" + std::to_string(i) + ".png",
                         static_cast<int>(c), Origin::kOriginal});
    }
  }
  return DatasetManifest(std::move(classes), std::move(samples));
}

struct VoteOracle {
  int predicted = 0;
  bool tie_break = false;
  bool exact_tie = false;
};

// Enumerates classes ranked by (votes desc, summed distance asc, index asc).
inline VoteOracle vote_oracle(const DistanceMatrix& d) {
  const int n = static_cast<int>(d.size());
  std::vector<int> votes(n, 0);
  std::vector<long double> sums(n, 0.0L);
  for (int j = 0; j < kSupportPerClass; ++j) {
    double lo = d[0][j];
    for (int i = 1; i < n; ++i) lo = std::min(lo, d[i][j]);
    for (int i = 0; i < n; ++i) {
      if (d[i][j] == lo) {
        ++votes[i];
        break;
      }
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < kSupportPerClass; ++j) sums[i] += d[i][j];
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (votes[a] != votes[b]) return votes[a] > votes[b];
    return sums[a] < sums[b];
  });
  VoteOracle out;
  out.predicted = order[0];
  if (n > 1 && votes[order[1]] == votes[order[0]]) {
    out.tie_break = true;
    out.exact_tie = sums[order[1]] == sums[order[0]];
  }
  return out;
}

// Random distance matrix; with `quantized` the entries come from a handful
// of half-integer values so column, vote and average ties are common.
inline DistanceMatrix random_distances(int classes, Rng& rng, bool quantized) {
  DistanceMatrix d(classes);
  for (auto& row : d)
    for (auto& v : row) v = quantized ? 0.5 * static_cast<double>(rng.uniform_index(4)) : rng.uniform(0.0, 4.0);
  return d;
}

}  // namespace leafsiam::testing

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

#include "leafsiam/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <vector>

#include "leafsiam/error.hpp"
#include "leafsiam/random.hpp"

namespace leafsiam {

namespace fs = std::filesystem;

namespace {

std::array<float, 3> hsv_to_rgb(float h, float s, float v) {
  const float hh = std::fmod(h, 1.0f) * 6.0f;
  const int sector = static_cast<int>(hh) % 6;
  const float f = hh - std::floor(hh);
  const float p = v * (1 - s), q = v * (1 - s * f), t = v * (1 - s * (1 - f));
  switch (sector) {
    case 0: return {v, t, p};
    case 1: return {q, v, p};
    case 2: return {p, v, t};
    case 3: return {p, q, v};
    case 4: return {t, p, v};
    default: return {v, p, q};
  }
}

std::string class_name(int c) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "class_%02d", c);
  return buf;
}

}  // namespace

PixelImage synthesize_image(int class_index, int class_count, int sample_index,
                            std::uint64_t seed) {
  Rng rng(Rng::splitmix(seed) ^ Rng::splitmix((static_cast<std::uint64_t>(class_index) << 32) |
                                              static_cast<std::uint32_t>(sample_index)));
  const float hue = static_cast<float>(class_index) / static_cast<float>(class_count);
  const auto base = hsv_to_rgb(hue, 0.65f, 0.75f);
  const double orientation = std::numbers::pi * class_index / class_count + rng.uniform(-0.1, 0.1);
  const double frequency = 3.0 + 2.0 * (class_index % 3) + rng.uniform(-0.3, 0.3);
  const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double brightness = rng.uniform(0.85, 1.1);
  const double cx = std::cos(orientation), sy = std::sin(orientation);

  PixelImage img(kImageChannels, kImageSide, kImageSide);
  for (int y = 0; y < kImageSide; ++y) {
    for (int x = 0; x < kImageSide; ++x) {
      const double u = (x * cx + y * sy) / kImageSide;
      const double stripe = 0.7 + 0.3 * std::sin(2.0 * std::numbers::pi * frequency * u + phase);
      for (int c = 0; c < kImageChannels; ++c) {
        const double v = base[c] * stripe * brightness + 0.04 * rng.normal();
        img.at(c, y, x) = static_cast<float>(std::clamp(v, 0.0, 1.0));
      }
    }
  }
  return img;
}

DatasetManifest generate_synthetic(int classes, int per_class, std::uint64_t seed,
                                   const fs::path& out_dir) {
  if (classes < 2) throw Error(ErrorKind::kSynthetic, "synthetic dataset needs at least 2 classes");
  std::vector<int> counts(static_cast<std::size_t>(classes), per_class);
  return generate_synthetic(counts, seed, out_dir);
}

DatasetManifest generate_synthetic(std::span<const int> per_class_counts, std::uint64_t seed,
                                   const fs::path& out_dir) {
  const int classes = static_cast<int>(per_class_counts.size());
  if (classes < 2) throw Error(ErrorKind::kSynthetic, "synthetic dataset needs at least 2 classes");
  for (int n : per_class_counts) {
    if (n < kMinSyntheticPerClass) {
      throw Error(ErrorKind::kSynthetic, "each class needs at least " +
                                             std::to_string(kMinSyntheticPerClass) +
                                             " samples, got " + std::to_string(n));
    }
  }
  fs::create_directories(out_dir);
  const auto root = fs::absolute(out_dir).lexically_normal();
  std::vector<std::string> names;
  std::vector<Sample> samples;
  for (int c = 0; c < classes; ++c) {
    names.push_back(class_name(c));
    for (int i = 0; i < per_class_counts[static_cast<std::size_t>(c)]; ++i) {
      char file[32];
      std::snprintf(file, sizeof(file), "img_%04d.png", i);
      const auto path = root / names.back() / file;
      write_png(synthesize_image(c, classes, i, seed), path);
      samples.push_back({path.generic_string(), c, Origin::kOriginal});
    }
  }
  DatasetManifest manifest(std::move(names), std::move(samples), seed);
  save_manifest(manifest, root / "manifest.json");
  return manifest;
}

}  // namespace leafsiam

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
#include <filesystem>
#include <span>

#include "leafsiam/image.hpp"
#include "leafsiam/manifest.hpp"

namespace leafsiam {

// Minimum per-class size: five support images plus one query.
inline constexpr int kMinSyntheticPerClass = 6;

// One 3x128x128 image of class `class_index` out of `class_count`. Each class
// has its own hue and stripe orientation/frequency; phase, brightness and
// pixel noise come from (seed, class_index, sample_index).
PixelImage synthesize_image(int class_index, int class_count, int sample_index,
                            std::uint64_t seed);

// Writes PNGs to out_dir/class_XX/img_YYYY.png plus out_dir/manifest.json and
// returns that manifest. Identical arguments give byte-identical files.
DatasetManifest generate_synthetic(int classes, int per_class, std::uint64_t seed,
                                   const std::filesystem::path& out_dir);

// Variant with an explicit per-class sample count (for imbalanced sets).
DatasetManifest generate_synthetic(std::span<const int> per_class_counts, std::uint64_t seed,
                                   const std::filesystem::path& out_dir);

}  // namespace leafsiam

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

#include <array>
#include <string_view>
#include <vector>

#include "leafsiam/image.hpp"

namespace leafsiam {

enum class Augmentation {
  kRotate90,
  kRotate180,
  kRotate270,
  kMirrorHorizontal,
  kMirrorVertical,
  kBrightnessUp,
  kBrightnessDown,
};

inline constexpr std::array<Augmentation, 7> kAugmentations = {
    Augmentation::kRotate90,         Augmentation::kRotate180,
    Augmentation::kRotate270,        Augmentation::kMirrorHorizontal,
    Augmentation::kMirrorVertical,   Augmentation::kBrightnessUp,
    Augmentation::kBrightnessDown,
};

inline constexpr float kBrightnessUpFactor = 1.25f;
inline constexpr float kBrightnessDownFactor = 0.75f;

// Short tag used in materialized file names ("rot90", "mirror_h", ...).
std::string_view augmentation_tag(Augmentation aug);

// Clockwise rotation by 90 degrees.
PixelImage rotate90(const PixelImage& image);
// Left-right flip.
PixelImage mirror_horizontal(const PixelImage& image);
// Top-bottom flip.
PixelImage mirror_vertical(const PixelImage& image);
// Multiplies every value by `factor` and clamps to [0, 1].
PixelImage scale_brightness(const PixelImage& image, float factor);

PixelImage apply_augmentation(const PixelImage& image, Augmentation aug);

// The seven variants in kAugmentations order. The original is not included.
std::vector<PixelImage> augment(const PixelImage& image);

}  // namespace leafsiam

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

#include "leafsiam/augment.hpp"

#include <algorithm>

namespace leafsiam {

std::string_view augmentation_tag(Augmentation aug) {
  switch (aug) {
    case Augmentation::kRotate90: return "rot90";
    case Augmentation::kRotate180: return "rot180";
    case Augmentation::kRotate270: return "rot270";
    case Augmentation::kMirrorHorizontal: return "mirror_h";
    case Augmentation::kMirrorVertical: return "mirror_v";
    case Augmentation::kBrightnessUp: return "bright_up";
    case Augmentation::kBrightnessDown: return "bright_down";
  }
  return "unknown";
}

PixelImage rotate90(const PixelImage& image) {
  PixelImage out(image.channels, image.width, image.height);
  for (int c = 0; c < image.channels; ++c) {
    for (int y = 0; y < out.height; ++y) {
      for (int x = 0; x < out.width; ++x) {
        out.at(c, y, x) = image.at(c, image.height - 1 - x, y);
      }
    }
  }
  return out;
}

PixelImage mirror_horizontal(const PixelImage& image) {
  PixelImage out(image.channels, image.height, image.width);
  for (int c = 0; c < image.channels; ++c) {
    for (int y = 0; y < image.height; ++y) {
      for (int x = 0; x < image.width; ++x) {
        out.at(c, y, x) = image.at(c, y, image.width - 1 - x);
      }
    }
  }
  return out;
}

PixelImage mirror_vertical(const PixelImage& image) {
  PixelImage out(image.channels, image.height, image.width);
  for (int c = 0; c < image.channels; ++c) {
    for (int y = 0; y < image.height; ++y) {
      std::copy_n(&image.values[image.index(c, image.height - 1 - y, 0)], image.width,
                  &out.values[out.index(c, y, 0)]);
    }
  }
  return out;
}

PixelImage scale_brightness(const PixelImage& image, float factor) {
  PixelImage out = image;
  for (float& v : out.values) v = std::clamp(v * factor, 0.0f, 1.0f);
  return out;
}

PixelImage apply_augmentation(const PixelImage& image, Augmentation aug) {
  switch (aug) {
    case Augmentation::kRotate90: return rotate90(image);
    case Augmentation::kRotate180: return rotate90(rotate90(image));
    case Augmentation::kRotate270: return rotate90(rotate90(rotate90(image)));
    case Augmentation::kMirrorHorizontal: return mirror_horizontal(image);
    case Augmentation::kMirrorVertical: return mirror_vertical(image);
    case Augmentation::kBrightnessUp: return scale_brightness(image, kBrightnessUpFactor);
    case Augmentation::kBrightnessDown: return scale_brightness(image, kBrightnessDownFactor);
  }
  return image;
}

std::vector<PixelImage> augment(const PixelImage& image) {
  std::vector<PixelImage> out;
  out.reserve(kAugmentations.size());
  for (Augmentation aug : kAugmentations) out.push_back(apply_augmentation(image, aug));
  return out;
}

}  // namespace leafsiam

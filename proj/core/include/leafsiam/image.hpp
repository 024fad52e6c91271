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
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace leafsiam {

inline constexpr int kImageChannels = 3;
inline constexpr int kImageSide = 128;

// Planar (channel-major) RGB image with values in [0, 1].
struct PixelImage {
  int channels = 0;
  int height = 0;
  int width = 0;
  std::vector<float> values;

  PixelImage() = default;
  PixelImage(int c, int h, int w, float fill = 0.0f)
      : channels(c), height(h), width(w),
        values(static_cast<std::size_t>(c) * h * w, fill) {}

  std::size_t index(int c, int y, int x) const noexcept {
    return (static_cast<std::size_t>(c) * height + y) * width + x;
  }
  float& at(int c, int y, int x) noexcept { return values[index(c, y, x)]; }
  float at(int c, int y, int x) const noexcept { return values[index(c, y, x)]; }

  friend bool operator==(const PixelImage&, const PixelImage&) = default;
};

// Throws a decode error if the shape is not 3 x side x side or a value falls
// outside [0, 1].
void validate_pixel_image(const PixelImage& image, int side = kImageSide);

// Decodes JPEG/PNG bytes at native resolution; grayscale is replicated to
// three channels and alpha is dropped.
PixelImage decode_image(std::span<const std::uint8_t> bytes, const std::string& origin);

// Bilinear resample with half-pixel centres and edge clamping.
PixelImage resize_bilinear(const PixelImage& image, int height, int width);

// decode_image followed by resize_bilinear to 128 x 128 when needed.
PixelImage decode_resize(std::span<const std::uint8_t> bytes, const std::string& origin);

PixelImage load_image(const std::filesystem::path& path);

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);

// Quantizes to 8 bits per channel and writes a lossless PNG.
void write_png(const PixelImage& image, const std::filesystem::path& path);

// 8-bit PNG encoding of the image, byte-for-byte what write_png stores.
std::vector<std::uint8_t> encode_png(const PixelImage& image);

}  // namespace leafsiam

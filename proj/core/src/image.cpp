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

#include "leafsiam/image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

#include "leafsiam/error.hpp"

namespace leafsiam {

namespace {

PixelImage from_rgb_float(const cv::Mat& rgb) {
  PixelImage out(kImageChannels, rgb.rows, rgb.cols);
  for (int y = 0; y < rgb.rows; ++y) {
    const auto* row = rgb.ptr<cv::Vec3f>(y);
    for (int x = 0; x < rgb.cols; ++x) {
      for (int c = 0; c < kImageChannels; ++c) {
        out.at(c, y, x) = std::clamp(row[x][c], 0.0f, 1.0f);
      }
    }
  }
  return out;
}

cv::Mat to_rgb_float(const PixelImage& image) {
  cv::Mat mat(image.height, image.width, CV_32FC3);
  for (int y = 0; y < image.height; ++y) {
    auto* row = mat.ptr<cv::Vec3f>(y);
    for (int x = 0; x < image.width; ++x) {
      for (int c = 0; c < kImageChannels; ++c) row[x][c] = image.at(c, y, x);
    }
  }
  return mat;
}

}  // namespace

void validate_pixel_image(const PixelImage& image, int side) {
  if (image.channels != kImageChannels || image.height != side || image.width != side) {
    throw Error(ErrorKind::kDecode, "image shape " + std::to_string(image.channels) + "x" +
                                        std::to_string(image.height) + "x" +
                                        std::to_string(image.width) + " is not 3x" +
                                        std::to_string(side) + "x" + std::to_string(side));
  }
  if (image.values.size() != static_cast<std::size_t>(image.channels) * image.height * image.width) {
    throw Error(ErrorKind::kDecode, "image buffer size does not match its shape");
  }
  for (float v : image.values) {
    if (!(v >= 0.0f && v <= 1.0f)) {
      throw Error(ErrorKind::kDecode, "pixel value outside [0, 1]");
    }
  }
}

PixelImage decode_image(std::span<const std::uint8_t> bytes, const std::string& origin) {
  if (bytes.empty()) throw Error(ErrorKind::kDecode, "empty image data: " + origin);
  cv::Mat buffer(1, static_cast<int>(bytes.size()), CV_8U,
                 const_cast<std::uint8_t*>(bytes.data()));
  cv::Mat decoded;
  try {
    decoded = cv::imdecode(buffer, cv::IMREAD_COLOR);
  } catch (const cv::Exception& e) {
    throw Error(ErrorKind::kDecode, "cannot decode " + origin + ": " + e.what());
  }
  if (decoded.empty()) throw Error(ErrorKind::kDecode, "cannot decode " + origin);

  cv::Mat rgb;
  cv::cvtColor(decoded, rgb, cv::COLOR_BGR2RGB);
  rgb.convertTo(rgb, CV_32FC3, 1.0 / 255.0);
  return from_rgb_float(rgb);
}

PixelImage resize_bilinear(const PixelImage& image, int height, int width) {
  if (image.channels != kImageChannels) {
    throw Error(ErrorKind::kDimension, "resize expects a 3-channel image");
  }
  if (image.height == height && image.width == width) return image;
  cv::Mat resized;
  cv::resize(to_rgb_float(image), resized, cv::Size(width, height), 0, 0, cv::INTER_LINEAR);
  return from_rgb_float(resized);
}

PixelImage decode_resize(std::span<const std::uint8_t> bytes, const std::string& origin) {
  return resize_bilinear(decode_image(bytes, origin), kImageSide, kImageSide);
}

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kIo, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

PixelImage load_image(const std::filesystem::path& path) {
  std::vector<std::uint8_t> bytes;
  try {
    bytes = read_file_bytes(path);
  } catch (const Error&) {
    throw Error(ErrorKind::kDecode, "cannot read " + path.string());
  }
  return decode_resize(bytes, path.string());
}

std::vector<std::uint8_t> encode_png(const PixelImage& image) {
  if (image.channels != kImageChannels) {
    throw Error(ErrorKind::kDimension, "png encoding expects a 3-channel image");
  }
  cv::Mat bgr(image.height, image.width, CV_8UC3);
  for (int y = 0; y < image.height; ++y) {
    auto* row = bgr.ptr<cv::Vec3b>(y);
    for (int x = 0; x < image.width; ++x) {
      for (int c = 0; c < kImageChannels; ++c) {
        const float v = std::clamp(image.at(c, y, x), 0.0f, 1.0f);
        row[x][2 - c] = static_cast<std::uint8_t>(std::lround(v * 255.0f));
      }
    }
  }
  std::vector<std::uint8_t> out;
  if (!cv::imencode(".png", bgr, out)) {
    throw Error(ErrorKind::kIo, "png encoding failed");
  }
  return out;
}

void write_png(const PixelImage& image, const std::filesystem::path& path) {
  const auto bytes = encode_png(image);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::kIo, "cannot write " + path.string());
}

}  // namespace leafsiam

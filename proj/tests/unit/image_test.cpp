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

#include <algorithm>
#include <cmath>
#include <fstream>

#include "leafsiam/error.hpp"
#include "leafsiam/image.hpp"
#include "leafsiam_testing.hpp"

namespace leafsiam {
namespace {

using testing::random_pixel_image;

// An image quantized to 8 bits so the PNG round trip is exact.
PixelImage quantized(int h, int w, std::uint64_t seed) {
  PixelImage img = random_pixel_image(h, w, seed);
  for (auto& v : img.values) v = std::round(v * 255.0f) / 255.0f;
  return img;
}

// Half-pixel bilinear interpolation, clamped at the borders.
PixelImage bilinear_oracle(const PixelImage& in, int oh, int ow) {
  PixelImage out(in.channels, oh, ow);
  const double sy = static_cast<double>(in.height) / oh;
  const double sx = static_cast<double>(in.width) / ow;
  for (int y = 0; y < oh; ++y) {
    double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, static_cast<double>(in.height - 1));
    const int y0 = static_cast<int>(std::floor(fy));
    const int y1 = std::min(y0 + 1, in.height - 1);
    const double wy = fy - y0;
    for (int x = 0; x < ow; ++x) {
      double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, static_cast<double>(in.width - 1));
      const int x0 = static_cast<int>(std::floor(fx));
      const int x1 = std::min(x0 + 1, in.width - 1);
      const double wx = fx - x0;
      for (int c = 0; c < in.channels; ++c) {
        const double top = in.at(c, y0, x0) * (1 - wx) + in.at(c, y0, x1) * wx;
        const double bot = in.at(c, y1, x0) * (1 - wx) + in.at(c, y1, x1) * wx;
        out.at(c, y, x) = static_cast<float>(top * (1 - wy) + bot * wy);
      }
    }
  }
  return out;
}

TEST(Image, PngRoundTripIsExact) {
  const PixelImage img = quantized(9, 13, 1);
  const auto bytes = encode_png(img);
  const PixelImage back = decode_image(bytes, "memory");
  ASSERT_EQ(back.height, 9);
  ASSERT_EQ(back.width, 13);
  ASSERT_EQ(back.channels, 3);
  for (std::size_t i = 0; i < img.values.size(); ++i) EXPECT_NEAR(back.values[i], img.values[i], 1e-6);
}

TEST(Image, ChannelOrderIsRgb) {
  PixelImage img(3, 1, 1);
  img.values = {1.0f, 0.0f, 0.0f};
  const PixelImage back = decode_image(encode_png(img), "red");
  EXPECT_FLOAT_EQ(back.at(0, 0, 0), 1.0f);
  EXPECT_FLOAT_EQ(back.at(1, 0, 0), 0.0f);
  EXPECT_FLOAT_EQ(back.at(2, 0, 0), 0.0f);
}

TEST(Image, DecodeResizeFrom227) {
  const PixelImage img = quantized(227, 227, 2);
  const PixelImage out = decode_resize(encode_png(img), "227");
  EXPECT_EQ(out.channels, 3);
  EXPECT_EQ(out.height, 128);
  EXPECT_EQ(out.width, 128);
  validate_pixel_image(out);
  const PixelImage ref = bilinear_oracle(img, 128, 128);
  for (std::size_t i = 0; i < ref.values.size(); ++i) ASSERT_NEAR(out.values[i], ref.values[i], 1.0 / 255.0);
}

TEST(Image, ResizeAt128IsIdentity) {
  const PixelImage img = quantized(128, 128, 3);
  const PixelImage out = decode_resize(encode_png(img), "128");
  for (std::size_t i = 0; i < img.values.size(); ++i) ASSERT_NEAR(out.values[i], img.values[i], 1e-6);
}

TEST(Image, NonSquareMatchesBilinearOracle) {
  const PixelImage img = random_pixel_image(150, 200, 4);
  const PixelImage out = resize_bilinear(img, 128, 128);
  const PixelImage ref = bilinear_oracle(img, 128, 128);
  double worst = 0.0;
  for (std::size_t i = 0; i < ref.values.size(); ++i)
    worst = std::max(worst, static_cast<double>(std::abs(out.values[i] - ref.values[i])));
  EXPECT_LE(worst, 1.0 / 255.0);
}

TEST(Image, UpscaleMatchesBilinearOracle) {
  const PixelImage img = random_pixel_image(40, 57, 5);
  const PixelImage out = resize_bilinear(img, 128, 128);
  const PixelImage ref = bilinear_oracle(img, 128, 128);
  for (std::size_t i = 0; i < ref.values.size(); ++i) ASSERT_NEAR(out.values[i], ref.values[i], 1.0 / 255.0);
}

TEST(Image, ConstantImageStaysConstant) {
  PixelImage img(3, 61, 33, 0.25f);
  const PixelImage out = resize_bilinear(img, 128, 128);
  for (float v : out.values) EXPECT_NEAR(v, 0.25f, 1e-6);
}

TEST(Image, GrayscaleExpandsToThreeChannels) {
  // binary PGM, single channel
  std::vector<std::uint8_t> bytes;
  const std::string header = "P5\n5 5\n255\n";
  bytes.assign(header.begin(), header.end());
  for (int i = 0; i < 25; ++i) bytes.push_back(static_cast<std::uint8_t>(i * 10));
  const PixelImage out = decode_image(bytes, "gray.pgm");
  ASSERT_EQ(out.channels, 3);
  ASSERT_EQ(out.height, 5);
  for (int y = 0; y < 5; ++y)
    for (int x = 0; x < 5; ++x) {
      EXPECT_NEAR(out.at(0, y, x), (y * 5 + x) * 10 / 255.0f, 1e-6);
      EXPECT_EQ(out.at(0, y, x), out.at(1, y, x));
      EXPECT_EQ(out.at(1, y, x), out.at(2, y, x));
    }
}

TEST(Image, UndecodableBytesRaise) {
  const std::vector<std::uint8_t> junk{'n', 'o', 't', ' ', 'a', 'n', ' ', 'i', 'm', 'a', 'g', 'e'};
  try {
    decode_image(junk, "junk.png");
    FAIL() << "expected a decode error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kDecode);
    EXPECT_NE(std::string(e.what()).find("junk.png"), std::string::npos);
  }
  EXPECT_THROW(decode_image({}, "empty"), Error);
}

TEST(Image, MissingFileRaises) {
  EXPECT_THROW(load_image("/nonexistent/leaf.png"), Error);
}

TEST(Image, ValidationRejectsBadImages) {
  PixelImage bad(3, 128, 128);
  bad.values[5] = 1.5f;
  EXPECT_THROW(validate_pixel_image(bad), Error);
  EXPECT_THROW(validate_pixel_image(PixelImage(3, 64, 64)), Error);
  EXPECT_THROW(validate_pixel_image(PixelImage(1, 128, 128)), Error);
  EXPECT_NO_THROW(validate_pixel_image(PixelImage(3, 128, 128, 0.5f)));
}

}  // namespace
}  // namespace leafsiam

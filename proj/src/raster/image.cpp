// Copyright 2026 The freqgen Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <string>

#include "freqgen/error.hpp"
#include "freqgen/raster.hpp"

namespace freqgen {

Image::Image(std::size_t height, std::size_t width, std::size_t channels)
    : Image(height, width, channels, std::vector<double>(height * width * channels, 0.0)) {}

Image::Image(std::size_t height, std::size_t width, std::size_t channels, std::vector<double> data)
    : height_(height), width_(width), channels_(channels), data_(std::move(data)) {
  if (channels != 1 && channels != 3) {
    throw InvalidInput("Image: channel count must be 1 or 3, got " + std::to_string(channels));
  }
  if (data_.size() != height * width * channels) {
    throw InvalidInput("Image: data length " + std::to_string(data_.size()) +
                       " does not match " + std::to_string(height) + "x" +
                       std::to_string(width) + "x" + std::to_string(channels));
  }
}

std::vector<double> Image::plane(std::size_t c) const {
  std::vector<double> out(pixel_count());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = data_[i * channels_ + c];
  return out;
}

void Image::set_plane(std::size_t c, std::span<const double> values) {
  if (values.size() != pixel_count() || c >= channels_) {
    throw InvalidInput("Image::set_plane: plane shape mismatch");
  }
  for (std::size_t i = 0; i < values.size(); ++i) data_[i * channels_ + c] = values[i];
}

void Image::clamp() {
  for (double& v : data_) v = std::clamp(v, 0.0, 1.0);
}

GrayImage::GrayImage(std::size_t height, std::size_t width)
    : GrayImage(height, width, std::vector<double>(height * width, 0.0)) {}

GrayImage::GrayImage(std::size_t height, std::size_t width, std::vector<double> data)
    : height_(height), width_(width), data_(std::move(data)) {
  if (data_.size() != height * width) {
    throw InvalidInput("GrayImage: data length does not match " + std::to_string(height) + "x" +
                       std::to_string(width));
  }
}

GrayImage rgb2gray(const Image& img) {
  if (img.channels() != 3) {
    throw InvalidInput("rgb2gray: expected 3 channels, got " + std::to_string(img.channels()));
  }
  GrayImage out(img.height(), img.width());
  const auto src = img.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    dst[i] = kLumaR * src[3 * i] + kLumaG * src[3 * i + 1] + kLumaB * src[3 * i + 2];
  }
  return out;
}

Image to_image(const GrayImage& gray) {
  std::vector<double> data(gray.data().begin(), gray.data().end());
  Image out(gray.height(), gray.width(), 1, std::move(data));
  out.clamp();
  return out;
}

std::uint8_t quantize(double v) {
  const double scaled = std::round(v * 255.0);
  if (!(scaled > 0.0)) return 0;  // also catches NaN
  if (scaled >= 255.0) return 255;
  return static_cast<std::uint8_t>(scaled);
}

Image quantized(const Image& img) {
  Image out = img;
  for (double& v : out.data()) v = dequantize(quantize(v));
  return out;
}

}  // namespace freqgen

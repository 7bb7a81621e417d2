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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace freqgen {

/// H x W x C raster, C in {1, 3}, row-major and channel-interleaved.
/// Samples are nominally in [0, 1]; operations that promise a displayable
/// result clamp into that range.
class Image {
 public:
  Image() = default;
  Image(std::size_t height, std::size_t width, std::size_t channels);
  Image(std::size_t height, std::size_t width, std::size_t channels, std::vector<double> data);

  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  std::size_t channels() const { return channels_; }
  std::size_t pixel_count() const { return height_ * width_; }
  bool empty() const { return data_.empty(); }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  double at(std::size_t y, std::size_t x, std::size_t c = 0) const {
    return data_[(y * width_ + x) * channels_ + c];
  }
  double& at(std::size_t y, std::size_t x, std::size_t c = 0) {
    return data_[(y * width_ + x) * channels_ + c];
  }

  /// One channel copied out as a dense H x W plane.
  std::vector<double> plane(std::size_t c) const;
  void set_plane(std::size_t c, std::span<const double> values);

  void clamp();

  bool operator==(const Image&) const = default;

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::size_t channels_ = 0;
  std::vector<double> data_;
};

/// Single-channel real raster without range restriction; high-frequency
/// residuals are signed.
class GrayImage {
 public:
  GrayImage() = default;
  GrayImage(std::size_t height, std::size_t width);
  GrayImage(std::size_t height, std::size_t width, std::vector<double> data);

  std::size_t height() const { return height_; }
  std::size_t width() const { return width_; }
  bool empty() const { return data_.empty(); }

  std::span<const double> data() const { return data_; }
  std::span<double> data() { return data_; }

  double at(std::size_t y, std::size_t x) const { return data_[y * width_ + x]; }
  double& at(std::size_t y, std::size_t x) { return data_[y * width_ + x]; }

  bool operator==(const GrayImage&) const = default;

 private:
  std::size_t height_ = 0;
  std::size_t width_ = 0;
  std::vector<double> data_;
};

inline constexpr double kLumaR = 0.299;
inline constexpr double kLumaG = 0.587;
inline constexpr double kLumaB = 0.114;

/// BT.601 luma. Throws InvalidInput unless img has 3 channels.
GrayImage rgb2gray(const Image& img);

/// Gray plane as a 1-channel Image, clamped to [0, 1].
Image to_image(const GrayImage& gray);

/// 8-bit quantization used at codec boundaries: round(v * 255) clamped.
std::uint8_t quantize(double v);
inline double dequantize(std::uint8_t v) { return static_cast<double>(v) / 255.0; }

/// Snaps every sample to the nearest 8-bit level (what a write/read cycle does).
Image quantized(const Image& img);

/// Reads PNG (8-bit gray/RGB, alpha is composited away) or binary PGM/PPM
/// (P5/P6, maxval 255), detected from the file signature.
/// Throws IoError, DecodeError or UnsupportedFormat.
Image read_image(const std::filesystem::path& path);

/// Writes by extension: .png, .pgm (1 channel) or .ppm (3 channels).
void write_image(const Image& img, const std::filesystem::path& path);

}  // namespace freqgen

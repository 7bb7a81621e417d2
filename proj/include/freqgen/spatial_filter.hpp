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

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "freqgen/raster.hpp"

namespace freqgen {

inline constexpr std::size_t kDefaultKernelSize = 63;
inline constexpr std::array<std::size_t, 6> kKernelSizeSweep = {7, 21, 35, 57, 63, 67};

/// Normalized g x g Gaussian, g odd. Stored both as the full 2D grid and
/// as the 1D factor whose outer product equals it.
class GaussianKernel {
 public:
  /// Throws InvalidParameter for even/zero size or sigma <= 0.
  GaussianKernel(std::size_t size, double sigma);

  std::size_t size() const { return size_; }
  std::size_t radius() const { return size_ / 2; }
  double sigma() const { return sigma_; }

  /// Row-major size x size weights, unit sum.
  std::span<const double> weights() const { return weights_; }
  double weight(std::size_t m, std::size_t n) const { return weights_[m * size_ + n]; }

  /// Unit-sum 1D factor.
  std::span<const double> taps() const { return taps_; }

 private:
  std::size_t size_;
  double sigma_;
  std::vector<double> weights_;
  std::vector<double> taps_;
};

GaussianKernel gaussian_kernel(std::size_t size, double sigma);

/// sigma = size / 6, so the support spans +-3 sigma.
double sigma_for_kernel_size(std::size_t size);

/// Reflect-101 border index (…c b | a b c … x y | x w…) for any integer
/// offset, periodic with period 2(n - 1).
std::size_t reflect_index(std::ptrdiff_t i, std::size_t n);

/// Gaussian low-pass: per-channel 2D correlation with reflect-101 borders.
GrayImage lowpass(const GrayImage& img, const GaussianKernel& kernel);
Image lowpass(const Image& img, const GaussianKernel& kernel);

/// gray - lowpass(gray), where gray is rgb2gray(img) or the single plane
/// of a 1-channel image. Signed output.
GrayImage high_freq(const Image& img, std::size_t kernel_size = kDefaultKernelSize);

/// High-frequency residual prepared as network input: shifted by +0.5,
/// clamped to [0, 1], replicated to 3 channels.
Image high_freq_for_network(const Image& img, std::size_t kernel_size = kDefaultKernelSize);

}  // namespace freqgen

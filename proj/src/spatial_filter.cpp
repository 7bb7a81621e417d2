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

#include "freqgen/spatial_filter.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "freqgen/error.hpp"
#include "freqgen/simd/kernels.hpp"

namespace freqgen {
namespace {

// Separable pass over one H x W plane. The horizontal pass correlates a
// reflect-padded copy of each row; the vertical pass accumulates whole
// rows with axpy so both directions run on contiguous memory.
void lowpass_plane(std::span<const double> src, std::span<double> dst, std::size_t h,
                   std::size_t w, const GaussianKernel& kernel) {
  const auto& kt = simd::active();
  const auto taps = kernel.taps();
  const std::size_t g = kernel.size();
  const auto r = static_cast<std::ptrdiff_t>(kernel.radius());

  std::vector<double> tmp(h * w);
  std::vector<double> padded(w + g - 1);
  for (std::size_t y = 0; y < h; ++y) {
    const double* row = src.data() + y * w;
    for (std::size_t i = 0; i < padded.size(); ++i) {
      padded[i] = row[reflect_index(static_cast<std::ptrdiff_t>(i) - r, w)];
    }
    kt.correlate_row(padded.data(), taps.data(), g, tmp.data() + y * w, w);
  }

  for (std::size_t y = 0; y < h; ++y) {
    double* out = dst.data() + y * w;
    std::fill(out, out + w, 0.0);
    for (std::size_t k = 0; k < g; ++k) {
      const std::size_t sy =
          reflect_index(static_cast<std::ptrdiff_t>(y + k) - r, h);
      kt.axpy(taps[k], tmp.data() + sy * w, out, w);
    }
  }
}

}  // namespace

GaussianKernel::GaussianKernel(std::size_t size, double sigma) : size_(size), sigma_(sigma) {
  if (size == 0 || size % 2 == 0) {
    throw InvalidParameter("gaussian_kernel: size must be odd and >= 1, got " +
                           std::to_string(size));
  }
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw InvalidParameter("gaussian_kernel: sigma must be positive");
  }
  const auto r = static_cast<std::ptrdiff_t>(size / 2);
  const double denom = 2.0 * sigma * sigma;

  weights_.resize(size * size);
  for (std::ptrdiff_t m = -r; m <= r; ++m) {
    for (std::ptrdiff_t n = -r; n <= r; ++n) {
      weights_[static_cast<std::size_t>((m + r) * static_cast<std::ptrdiff_t>(size) + (n + r))] =
          std::exp(-static_cast<double>(m * m + n * n) / denom);
    }
  }
  const double total = std::accumulate(weights_.begin(), weights_.end(), 0.0);
  for (double& v : weights_) v /= total;

  taps_.resize(size);
  for (std::ptrdiff_t m = -r; m <= r; ++m) {
    taps_[static_cast<std::size_t>(m + r)] = std::exp(-static_cast<double>(m * m) / denom);
  }
  const double tap_total = std::accumulate(taps_.begin(), taps_.end(), 0.0);
  for (double& v : taps_) v /= tap_total;
}

GaussianKernel gaussian_kernel(std::size_t size, double sigma) { return {size, sigma}; }

double sigma_for_kernel_size(std::size_t size) { return static_cast<double>(size) / 6.0; }

std::size_t reflect_index(std::ptrdiff_t i, std::size_t n) {
  if (n <= 1) return 0;
  const auto period = static_cast<std::ptrdiff_t>(2 * (n - 1));
  i %= period;
  if (i < 0) i += period;
  if (i >= static_cast<std::ptrdiff_t>(n)) i = period - i;
  return static_cast<std::size_t>(i);
}

GrayImage lowpass(const GrayImage& img, const GaussianKernel& kernel) {
  if (img.empty()) throw InvalidInput("lowpass: empty image");
  GrayImage out(img.height(), img.width());
  lowpass_plane(img.data(), out.data(), img.height(), img.width(), kernel);
  return out;
}

Image lowpass(const Image& img, const GaussianKernel& kernel) {
  if (img.empty()) throw InvalidInput("lowpass: empty image");
  Image out(img.height(), img.width(), img.channels());
  std::vector<double> filtered(img.pixel_count());
  for (std::size_t c = 0; c < img.channels(); ++c) {
    const auto plane = img.plane(c);
    lowpass_plane(plane, filtered, img.height(), img.width(), kernel);
    out.set_plane(c, filtered);
  }
  return out;
}

GrayImage high_freq(const Image& img, std::size_t kernel_size) {
  const GaussianKernel kernel(kernel_size, sigma_for_kernel_size(kernel_size));
  GrayImage gray = img.channels() == 1 ? GrayImage(img.height(), img.width(), img.plane(0)) : rgb2gray(img);
  // Filtering relative to one pixel's level makes flat regions exactly zero.
  auto g = gray.data();
  const double level = g.empty() ? 0.0 : g[0];
  for (double& v : g) v -= level;
  const GrayImage low = lowpass(gray, kernel);
  const auto l = low.data();
  for (std::size_t i = 0; i < g.size(); ++i) g[i] -= l[i];
  return gray;
}

Image high_freq_for_network(const Image& img, std::size_t kernel_size) {
  const GrayImage residual = high_freq(img, kernel_size);
  Image out(img.height(), img.width(), 3);
  auto dst = out.data();
  const auto src = residual.data();
  for (std::size_t i = 0; i < src.size(); ++i) {
    const double v = std::clamp(src[i] + 0.5, 0.0, 1.0);
    dst[3 * i] = dst[3 * i + 1] = dst[3 * i + 2] = v;
  }
  return out;
}

}  // namespace freqgen

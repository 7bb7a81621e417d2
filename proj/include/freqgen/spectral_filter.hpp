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
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "freqgen/raster.hpp"
#include "freqgen/rng.hpp"

namespace freqgen {

using cplx = std::complex<double>;

enum class SpectrumLayout { kNatural, kCentered };

/// Per-channel frequency grids, stored planar: coeffs[c * H * W + u * W + v].
/// Natural layout has DC at (0, 0); centered has it at (H/2, W/2) (floor).
struct Spectrum {
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t channels = 0;
  SpectrumLayout layout = SpectrumLayout::kNatural;
  std::vector<cplx> coeffs;

  std::span<cplx> plane(std::size_t c) {
    return {coeffs.data() + c * height * width, height * width};
  }
  std::span<const cplx> plane(std::size_t c) const {
    return {coeffs.data() + c * height * width, height * width};
  }
  cplx at(std::size_t u, std::size_t v, std::size_t c = 0) const {
    return coeffs[c * height * width + u * width + v];
  }
};

/// Polar form of a spectrum. amplitude >= 0, phase in (-pi, pi].
struct AmpPhase {
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t channels = 0;
  SpectrumLayout layout = SpectrumLayout::kNatural;
  std::vector<double> amplitude;
  std::vector<double> phase;
};

/// High-pass mask over a centered grid: 1 outside radius d, 0 inside,
/// 1/2 on the circle; d == 0 passes everything.
struct FilterMask {
  std::size_t height = 0;
  std::size_t width = 0;
  double diameter = 0.0;
  std::vector<double> values;

  double at(std::size_t u, std::size_t v) const { return values[u * width + v]; }
};

struct AugmentParams {
  double d = 0.0;
  double alpha = 1.0;
  double beta = 1.0;
};

/// Severity levels as fractions of the shorter image side (x224 gives
/// 2.24 ... 11.2) and the amplitude/phase scaling levels.
inline constexpr std::array<double, 5> kSeverityFractions = {0.01, 0.02, 0.03, 0.04, 0.05};
inline constexpr std::array<double, 5> kScalingLevels = {0.6, 0.7, 0.8, 0.9, 1.0};
inline constexpr std::size_t kReferenceSide = 224;

std::array<double, 5> severity_diameters(std::size_t min_side = kReferenceSide);

Spectrum dft2(std::span<const double> plane, std::size_t height, std::size_t width);
Spectrum dft2(const GrayImage& img);
/// All channels of img.
Spectrum dft2(const Image& img);

/// Inverse transform of one channel; the spectrum must be in natural layout.
std::vector<cplx> idft2(const Spectrum& spec, std::size_t channel = 0);

/// Quadrant swap moving DC to (H/2, W/2). Throws InvalidState if the
/// spectrum is already centered (resp. not centered for uncenter).
Spectrum center(Spectrum spec);
Spectrum uncenter(Spectrum spec);

AmpPhase amp_phase(const Spectrum& spec);
/// amplitude * exp(+i * phase).
Spectrum recombine(const AmpPhase& ap);

/// Throws InvalidParameter for negative (or non-finite) d.
FilterMask highpass_mask(std::size_t height, std::size_t width, double d);

/// Multiplies every channel by the mask. Requires centered layout and
/// matching dimensions.
void apply_mask(Spectrum& spec, const FilterMask& mask);

/// amplitude *= alpha, phase *= beta. Both factors must lie in (0, 1].
AmpPhase scale_amp_phase(AmpPhase ap, double alpha, double beta);

/// Throws InvalidParameter unless d >= 0 and alpha, beta in (0, 1].
void validate(const AugmentParams& params);

/// Real part of the inverse transform before clamping, interleaved like
/// Image data, plus the largest discarded imaginary magnitude.
struct TwoStepRaw {
  std::size_t height = 0;
  std::size_t width = 0;
  std::size_t channels = 0;
  std::vector<double> real;
  double max_abs_imag = 0.0;
};

TwoStepRaw two_step_highpass_raw(const Image& img, const AugmentParams& params);

/// Per channel: DFT, center, mask(d), polar split, scale (alpha, beta),
/// recombine, uncenter, inverse DFT, real part, clamp to [0, 1].
Image two_step_highpass(const Image& img, const AugmentParams& params);

/// d uniform over the five severities for min_side, alpha and beta
/// independently uniform over the scaling levels.
AugmentParams sample_params(Rng& rng, std::size_t min_side = kReferenceSide);

}  // namespace freqgen

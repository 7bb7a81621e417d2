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

#include "freqgen/spectral_filter.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "freqgen/error.hpp"
#include "freqgen/fft.hpp"

namespace freqgen {
namespace {

Spectrum shifted(Spectrum spec, std::size_t du, std::size_t dv) {
  const std::size_t h = spec.height, w = spec.width;
  std::vector<cplx> out(spec.coeffs.size());
  for (std::size_t c = 0; c < spec.channels; ++c) {
    const auto src = spec.plane(c);
    cplx* dst = out.data() + c * h * w;
    for (std::size_t u = 0; u < h; ++u) {
      const std::size_t tu = (u + du) % h;
      for (std::size_t v = 0; v < w; ++v) dst[tu * w + (v + dv) % w] = src[u * w + v];
    }
  }
  spec.coeffs = std::move(out);
  return spec;
}

void check_factor(double f, const char* name) {
  if (!(f > 0.0 && f <= 1.0)) {
    throw InvalidParameter(std::string(name) + " must lie in (0, 1], got " + std::to_string(f));
  }
}

}  // namespace

std::array<double, 5> severity_diameters(std::size_t min_side) {
  std::array<double, 5> out{};
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = static_cast<double>(min_side) * kSeverityFractions[i];
  }
  return out;
}

Spectrum dft2(std::span<const double> plane, std::size_t height, std::size_t width) {
  if (height == 0 || width == 0 || plane.size() != height * width) {
    throw InvalidInput("dft2: plane must be a non-empty H x W grid");
  }
  Spectrum spec{height, width, 1, SpectrumLayout::kNatural,
                std::vector<cplx>(plane.begin(), plane.end())};
  fft::forward_2d(spec.coeffs, height, width);
  return spec;
}

Spectrum dft2(const GrayImage& img) { return dft2(img.data(), img.height(), img.width()); }

Spectrum dft2(const Image& img) {
  if (img.empty()) throw InvalidInput("dft2: empty image");
  const std::size_t hw = img.pixel_count();
  Spectrum spec{img.height(), img.width(), img.channels(), SpectrumLayout::kNatural,
                std::vector<cplx>(hw * img.channels())};
  for (std::size_t c = 0; c < img.channels(); ++c) {
    auto dst = spec.plane(c);
    const auto src = img.data();
    for (std::size_t i = 0; i < hw; ++i) dst[i] = src[i * img.channels() + c];
    fft::forward_2d(dst, img.height(), img.width());
  }
  return spec;
}

std::vector<cplx> idft2(const Spectrum& spec, std::size_t channel) {
  if (spec.layout != SpectrumLayout::kNatural) {
    throw InvalidState("idft2: spectrum must be in natural layout");
  }
  if (channel >= spec.channels) throw InvalidInput("idft2: channel out of range");
  const auto src = spec.plane(channel);
  std::vector<cplx> out(src.begin(), src.end());
  fft::inverse_2d(out, spec.height, spec.width);
  return out;
}

Spectrum center(Spectrum spec) {
  if (spec.layout != SpectrumLayout::kNatural) {
    throw InvalidState("center: spectrum is already centered");
  }
  const std::size_t du = spec.height / 2, dv = spec.width / 2;
  spec = shifted(std::move(spec), du, dv);
  spec.layout = SpectrumLayout::kCentered;
  return spec;
}

Spectrum uncenter(Spectrum spec) {
  if (spec.layout != SpectrumLayout::kCentered) {
    throw InvalidState("uncenter: spectrum is not centered");
  }
  const std::size_t du = spec.height - spec.height / 2, dv = spec.width - spec.width / 2;
  spec = shifted(std::move(spec), du % spec.height, dv % spec.width);
  spec.layout = SpectrumLayout::kNatural;
  return spec;
}

AmpPhase amp_phase(const Spectrum& spec) {
  AmpPhase ap{spec.height, spec.width, spec.channels, spec.layout,
              std::vector<double>(spec.coeffs.size()), std::vector<double>(spec.coeffs.size())};
  for (std::size_t i = 0; i < spec.coeffs.size(); ++i) {
    const double re = spec.coeffs[i].real(), im = spec.coeffs[i].imag();
    ap.amplitude[i] = std::sqrt(re * re + im * im);
    double p = std::atan2(im, re);
    if (p == -std::numbers::pi) p = std::numbers::pi;
    ap.phase[i] = p;
  }
  return ap;
}

Spectrum recombine(const AmpPhase& ap) {
  Spectrum spec{ap.height, ap.width, ap.channels, ap.layout,
                std::vector<cplx>(ap.amplitude.size())};
  for (std::size_t i = 0; i < ap.amplitude.size(); ++i) {
    spec.coeffs[i] = {ap.amplitude[i] * std::cos(ap.phase[i]),
                      ap.amplitude[i] * std::sin(ap.phase[i])};
  }
  return spec;
}

FilterMask highpass_mask(std::size_t height, std::size_t width, double d) {
  if (!(d >= 0.0) || !std::isfinite(d)) {
    throw InvalidParameter("highpass_mask: diameter must be finite and >= 0");
  }
  FilterMask mask{height, width, d, std::vector<double>(height * width, 1.0)};
  if (d == 0.0) return mask;
  const auto cu = static_cast<std::ptrdiff_t>(height / 2);
  const auto cv = static_cast<std::ptrdiff_t>(width / 2);
  for (std::size_t u = 0; u < height; ++u) {
    for (std::size_t v = 0; v < width; ++v) {
      const auto du = static_cast<std::ptrdiff_t>(u) - cu;
      const auto dv = static_cast<std::ptrdiff_t>(v) - cv;
      const double dist = std::sqrt(static_cast<double>(du * du + dv * dv));
      const double diff = dist - d;
      const double sgn = diff > 0.0 ? 1.0 : (diff < 0.0 ? -1.0 : 0.0);
      mask.values[u * width + v] = 0.5 * (1.0 + sgn);
    }
  }
  return mask;
}

void apply_mask(Spectrum& spec, const FilterMask& mask) {
  if (spec.layout != SpectrumLayout::kCentered) {
    throw InvalidState("apply_mask: mask is defined on the centered spectrum");
  }
  if (spec.height != mask.height || spec.width != mask.width) {
    throw InvalidInput("apply_mask: mask and spectrum sizes differ");
  }
  for (std::size_t c = 0; c < spec.channels; ++c) {
    auto p = spec.plane(c);
    for (std::size_t i = 0; i < p.size(); ++i) p[i] *= mask.values[i];
  }
}

AmpPhase scale_amp_phase(AmpPhase ap, double alpha, double beta) {
  check_factor(alpha, "alpha");
  check_factor(beta, "beta");
  for (double& a : ap.amplitude) a *= alpha;
  for (double& p : ap.phase) p *= beta;
  return ap;
}

void validate(const AugmentParams& params) {
  if (!(params.d >= 0.0) || !std::isfinite(params.d)) {
    throw InvalidParameter("d must be finite and >= 0");
  }
  check_factor(params.alpha, "alpha");
  check_factor(params.beta, "beta");
}

TwoStepRaw two_step_highpass_raw(const Image& img, const AugmentParams& params) {
  validate(params);
  if (img.empty()) throw InvalidInput("two_step_highpass: empty image");
  const std::size_t h = img.height(), w = img.width(), ch = img.channels();
  const FilterMask mask = highpass_mask(h, w, params.d);

  Spectrum spec = center(dft2(img));
  apply_mask(spec, mask);
  spec = uncenter(recombine(scale_amp_phase(amp_phase(spec), params.alpha, params.beta)));

  TwoStepRaw raw{h, w, ch, std::vector<double>(h * w * ch), 0.0};
  for (std::size_t c = 0; c < ch; ++c) {
    const auto spatial = idft2(spec, c);
    for (std::size_t i = 0; i < spatial.size(); ++i) {
      raw.real[i * ch + c] = spatial[i].real();
      raw.max_abs_imag = std::max(raw.max_abs_imag, std::abs(spatial[i].imag()));
    }
  }
  return raw;
}

Image two_step_highpass(const Image& img, const AugmentParams& params) {
  TwoStepRaw raw = two_step_highpass_raw(img, params);
  Image out(raw.height, raw.width, raw.channels, std::move(raw.real));
  out.clamp();
  return out;
}

AugmentParams sample_params(Rng& rng, std::size_t min_side) {
  const auto diameters = severity_diameters(min_side);
  AugmentParams p;
  p.d = diameters[rng.below(diameters.size())];
  p.alpha = kScalingLevels[rng.below(kScalingLevels.size())];
  p.beta = kScalingLevels[rng.below(kScalingLevels.size())];
  return p;
}

}  // namespace freqgen

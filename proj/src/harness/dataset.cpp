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

#include "freqgen/harness/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "freqgen/rng.hpp"

namespace freqgen::harness {
namespace {

struct Rgb {
  double r, g, b;
};

Rgb hsv(double hue_deg, double s, double v) {
  double h = std::fmod(hue_deg, 360.0);
  if (h < 0.0) h += 360.0;
  const double c = v * s;
  const double hp = h / 60.0;
  const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
  Rgb out{0.0, 0.0, 0.0};
  if (hp < 1.0) out = {c, x, 0.0};
  else if (hp < 2.0) out = {x, c, 0.0};
  else if (hp < 3.0) out = {0.0, c, x};
  else if (hp < 4.0) out = {0.0, x, c};
  else if (hp < 5.0) out = {x, 0.0, c};
  else out = {c, 0.0, x};
  const double m = v - c;
  return {out.r + m, out.g + m, out.b + m};
}

// Displayed hue of (domain, class): 12 slots 30 degrees apart, one
// quarter of the wheel per domain. The inverted domain is drawn with the
// opposite hue so that its displayed hue lands in its own slot.
double class_hue(std::size_t domain, std::size_t cls) {
  const double hue = 30.0 * static_cast<double>(kClassCount * domain + cls);
  return domain == 3 ? hue + 180.0 : hue;
}

struct Shape {
  std::size_t kind;
  double cx, cy, size, angle;
};

bool inside(const Shape& s, double x, double y) {
  const double dx = x - s.cx, dy = y - s.cy;
  const double c = std::cos(s.angle), sn = std::sin(s.angle);
  const double u = c * dx + sn * dy;
  const double v = -sn * dx + c * dy;
  switch (s.kind) {
    case 0:
      return dx * dx + dy * dy <= s.size * s.size;
    case 1: {
      const double half = 0.886 * s.size;  // equal area with the disk
      return std::abs(u) <= half && std::abs(v) <= half;
    }
    default: {
      // Equilateral triangle, apex up, circumradius r.
      const double r = 1.4 * s.size;
      const double k = std::numbers::sqrt3;
      if (v > r / 2.0) return false;
      if (k * u - v > r) return false;
      if (-k * u - v > r) return false;
      return true;
    }
  }
}

double coverage(const Shape& s, std::size_t px, std::size_t py) {
  constexpr int kSub = 4;
  int hits = 0;
  for (int sy = 0; sy < kSub; ++sy) {
    for (int sx = 0; sx < kSub; ++sx) {
      const double x = static_cast<double>(px) + (sx + 0.5) / kSub;
      const double y = static_cast<double>(py) + (sy + 0.5) / kSub;
      hits += inside(s, x, y) ? 1 : 0;
    }
  }
  return static_cast<double>(hits) / (kSub * kSub);
}

Image render(std::size_t domain, std::size_t cls, std::uint64_t sample_seed,
             const SynthOptions& options) {
  Rng rng(sample_seed);
  const double side = static_cast<double>(kImageSide);

  Shape shape{cls, rng.uniform(0.38 * side, 0.62 * side), rng.uniform(0.38 * side, 0.62 * side),
              rng.uniform(0.26 * side, 0.33 * side), rng.uniform(-0.26, 0.26)};
  // Stripe texture, oriented per class at 0, 60 or 120 degrees.
  const double theta = std::numbers::pi / 3.0 * static_cast<double>(cls) + rng.uniform(-0.17, 0.17);
  const double freq = 2.0 * std::numbers::pi / rng.uniform(3.5, 5.0);
  const double fx = std::cos(theta) * freq, fy = std::sin(theta) * freq;
  const double offset = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const Rgb fg{rng.uniform(0.65, 1.0), rng.uniform(0.65, 1.0), rng.uniform(0.65, 1.0)};

  std::size_t hue_class = cls;
  if (rng.uniform() >= options.spurious_rate) {
    hue_class = (cls + 1 + rng.below(kClassCount - 1)) % kClassCount;
  }
  const Rgb bg = hsv(class_hue(domain, hue_class) + rng.uniform(-6.0, 6.0), 0.85,
                     rng.uniform(0.35, 0.5));
  const double grad_angle = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double gx = std::cos(grad_angle), gy = std::sin(grad_angle);

  Image img(kImageSide, kImageSide, 3);
  for (std::size_t y = 0; y < kImageSide; ++y) {
    for (std::size_t x = 0; x < kImageSide; ++x) {
      const double xd = static_cast<double>(x), yd = static_cast<double>(y);
      Rgb b = bg;
      if (options.foreground_only) {
        b = {0.5, 0.5, 0.5};
      } else if (domain == 1) {
        // Position along the gradient direction, mapped to [0, 1].
        const double t = 0.5 + ((xd - side / 2) * gx + (yd - side / 2) * gy) / (side * std::numbers::sqrt2);
        const double f = 0.5 + t;
        b = {bg.r * f, bg.g * f, bg.b * f};
      } else if (domain == 2) {
        b = {bg.r + rng.uniform(-0.25, 0.25), bg.g + rng.uniform(-0.25, 0.25),
             bg.b + rng.uniform(-0.25, 0.25)};
      }
      const double a = coverage(shape, x, y);
      const double stripe = 0.55 + 0.45 * std::cos(fx * xd + fy * yd + offset);
      const Rgb f{fg.r * stripe, fg.g * stripe, fg.b * stripe};
      const double px[3] = {b.r * (1 - a) + f.r * a, b.g * (1 - a) + f.g * a, b.b * (1 - a) + f.b * a};
      for (std::size_t c = 0; c < 3; ++c) {
        double v = std::clamp(px[c], 0.0, 1.0);
        if (domain == 3 && !options.foreground_only) v = 1.0 - v;
        img.at(y, x, c) = v;
      }
    }
  }
  return img;
}

}  // namespace

std::vector<DomainSample> synth_dataset(std::uint64_t seed, std::size_t n_per_domain_class,
                                        const SynthOptions& options) {
  std::vector<DomainSample> out;
  out.reserve(kDomainCount * kClassCount * n_per_domain_class);
  for (std::size_t d = 0; d < kDomainCount; ++d) {
    for (std::size_t c = 0; c < kClassCount; ++c) {
      for (std::size_t i = 0; i < n_per_domain_class; ++i) {
        const std::uint64_t tag = ((d * kClassCount + c) << 32) | i;
        out.push_back({render(d, c, derive_seed(seed, tag), options), c, d});
      }
    }
  }
  return out;
}

}  // namespace freqgen::harness

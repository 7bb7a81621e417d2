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
#include <cstdint>
#include <string_view>
#include <vector>

#include "freqgen/raster.hpp"

namespace freqgen::harness {

inline constexpr std::size_t kClassCount = 3;
inline constexpr std::size_t kDomainCount = 4;
inline constexpr std::size_t kImageSide = 32;

inline constexpr std::array<std::string_view, kClassCount> kClassNames = {"disk", "square",
                                                                          "triangle"};
inline constexpr std::array<std::string_view, kDomainCount> kDomainNames = {
    "solid", "gradient", "noise", "inverted"};

struct DomainSample {
  Image image;
  std::size_t label = 0;
  std::size_t domain = 0;
};

struct SynthOptions {
  /// Probability that a sample's background takes its class's hue in its
  /// domain; otherwise another class's hue from the same domain is used.
  double spurious_rate = 0.95;
  /// Render shapes on a uniform mid-gray background (no domain nuisance).
  bool foreground_only = false;
};

// Procedural shapes-on-backgrounds data. Within a domain the background
// hue predicts the class; each domain owns a separate quarter of the
// color wheel, so hue never carries over to an unseen domain. Shapes carry
// a stripe texture oriented per class. Shape geometry and texture are
// drawn from the same distribution everywhere.
// Sample (domain, class, i) depends only on (seed, domain, class, i).
std::vector<DomainSample> synth_dataset(std::uint64_t seed, std::size_t n_per_domain_class,
                                        const SynthOptions& options = {});

}  // namespace freqgen::harness

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

#include <cstdint>
#include <string>
#include <vector>

namespace freqgen::harness {

inline constexpr double kGradCheckEpsilon = 1e-4;
inline constexpr double kGradCheckTolerance = 1e-5;

// Entries compare analytic gradients against central differences,
// rel = |a - n| / max(|a|, |n|, floor). The floor keeps gradients that are
// zero up to roundoff from producing meaningless ratios.
inline constexpr double kGradCheckFloor = 1e-4;

struct GradCheckEntry {
  std::string name;
  double max_rel_error = 0.0;
  double max_abs_error = 0.0;
};

struct GradCheckReport {
  std::vector<GradCheckEntry> entries;

  double worst() const;
  bool passed(double tolerance = kGradCheckTolerance) const { return worst() < tolerance; }
};

double relative_error(double analytic, double numeric);

/// Tail Interaction alone, loss = 0.5 * ||forward(F)||^2 on a random
/// (B=2, N=5, S=4, z=3) instance.
GradCheckReport check_layer_gradients(std::uint64_t seed, double epsilon = kGradCheckEpsilon);

/// The whole classifier (patch embedding, Tail Interaction, pooling, head,
/// cross-entropy) on a random 4-image batch.
GradCheckReport check_model_gradients(std::uint64_t seed, double epsilon = kGradCheckEpsilon);

}  // namespace freqgen::harness

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
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace freqgen::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 2,  // bad flags, config or parameters
  kExitIo = 3,     // unreadable input, write failure, output collision
  kExitCheck = 4,  // gradcheck failure
};

enum class AugmentMode { kTwoStep, kGaussian };

struct AugmentOptions {
  std::filesystem::path in_dir;
  std::filesystem::path out_dir;
  AugmentMode mode = AugmentMode::kTwoStep;
  double d = 0.0;  // pixels
  double alpha = 1.0;
  double beta = 1.0;
  std::size_t kernel = 63;
  bool random = false;
  std::optional<std::uint64_t> seed;
  std::size_t workers = 1;
  bool force = false;
};

struct AugmentSummary {
  std::size_t written = 0;
  std::size_t skipped = 0;  // unreadable inputs
};

inline constexpr const char* kManifestName = "manifest.csv";

/// Mirrors every .png/.ppm/.pgm under in_dir into out_dir and writes
/// out_dir/manifest.csv sorted by path. Throws InvalidParameter when the
/// directories overlap or a random run has no seed, IoError on collisions.
AugmentSummary augment_tree(const AugmentOptions& options, std::ostream& log);

/// Writes <prefix>_amplitude.png (log1p, max-normalized) and
/// <prefix>_phase.png ((phase + pi) / 2pi), both centered.
void write_spectrum_images(const std::filesystem::path& image, const std::string& prefix);

/// Entry point with injectable streams; args exclude the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

}  // namespace freqgen::cli

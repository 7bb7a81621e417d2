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
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "freqgen/harness/train.hpp"

namespace freqgen::harness {

// Flat "key = value" experiment files; '#' starts a comment. Keys:
//   name, augmentation (none|gaussian|two_step), tail_interaction,
//   phase_scaling, amplitude_scaling, nesterov (true|false),
//   seed, seeds (comma list), epochs, batch_size, learning_rate, momentum,
//   weight_decay, features, unit_size, ti_blocks, kernel_size,
//   severity (fraction or "random"), scale (factor or "random"),
//   samples_per_class, validation_fraction, spurious_rate,
//   held_out_domains (comma list of names or indices)
struct ConfigFile {
  ExperimentConfig experiment;
  std::vector<std::uint64_t> seeds;  // empty: just experiment.seed
  bool has_seed = false;             // seed or seeds given
};

/// Throws ConfigError naming the source, line and key on any problem.
ConfigFile parse_config(std::istream& in, const std::string& source = "<config>");
ConfigFile load_config(const std::filesystem::path& path);

/// Sets one key; '-' in the key is read as '_'. Throws ConfigError.
void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value);

/// Seeds a config file asks for.
std::vector<std::uint64_t> seeds_of(const ConfigFile& file);

}  // namespace freqgen::harness

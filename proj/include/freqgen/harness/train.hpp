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
#include <optional>
#include <string>
#include <vector>

#include "freqgen/harness/dataset.hpp"
#include "freqgen/harness/model.hpp"
#include "freqgen/spectral_filter.hpp"

namespace freqgen::harness {

enum class Augmentation { kNone, kGaussian, kTwoStep };

std::string to_string(Augmentation a);
Augmentation parse_augmentation(const std::string& text);

struct ExperimentConfig {
  std::string name = "experiment";
  Augmentation augmentation = Augmentation::kNone;
  bool use_tail_interaction = false;
  // Only consulted for two-step augmentation; a disabled scaling pins its
  // factor to 1.
  bool use_phase_scaling = true;
  bool use_amplitude_scaling = true;

  std::uint64_t seed = 1;
  std::size_t epochs = 10;
  std::size_t batch_size = 32;
  double learning_rate = 0.05;
  double momentum = 0.9;
  double weight_decay = 5e-4;
  bool nesterov = true;

  std::size_t features = 48;
  std::size_t unit_size = 16;
  std::size_t ti_blocks = 1;
  std::size_t kernel_size = 63;

  /// Fixed severity as a fraction of the image side, or random level.
  std::optional<double> severity;
  /// Fixed value for both alpha and beta, or random level.
  std::optional<double> scale;

  std::size_t samples_per_class = 40;
  double validation_fraction = 0.2;
  double spurious_rate = 0.95;
  std::vector<std::size_t> held_out_domains = {0, 1, 2, 3};

  ModelConfig model_config() const;
};

struct FoldMetrics {
  std::size_t held_out_domain = 0;
  double held_out_accuracy = 0.0;
  double validation_accuracy = 0.0;
  std::size_t best_epoch = 0;
  std::vector<double> loss_curve;  // mean training loss per epoch
  bool failed = false;             // non-finite loss
};

struct Metrics {
  std::string config;
  std::uint64_t seed = 0;
  std::vector<FoldMetrics> folds;

  double mean_held_out() const;
  double mean_validation() const;
  bool failed() const;
};

/// Augmented counterpart of a training image under the config, drawn
/// from rng.
Image augment_for_training(const Image& img, const ExperimentConfig& config, Rng& rng);

double accuracy(const Model& model, const std::vector<const DomainSample*>& samples);

struct FoldResult {
  FoldMetrics metrics;
  Model model;  // parameters from the best-validation epoch
};

/// Trains on every domain except held_out; validation is a fixed split of
/// the source domains. Selects the epoch with the best validation
/// accuracy (latest on ties).
FoldResult train_fold(const ExperimentConfig& config, const std::vector<DomainSample>& data,
                      std::size_t held_out);

/// Leave-one-domain-out over config.held_out_domains.
Metrics train(const ExperimentConfig& config);

/// Component ablation: baseline, HP, HP+TI, HP+AS+TI, HP+PS+TI,
/// HP+PS+AS, HP+PS+AS+TI.
std::vector<ExperimentConfig> ablation_grid(const ExperimentConfig& base);

}  // namespace freqgen::harness

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
#include <span>
#include <string>
#include <vector>

#include "freqgen/raster.hpp"
#include "freqgen/rng.hpp"
#include "freqgen/tail_interaction.hpp"

namespace freqgen::harness {

struct ModelConfig {
  std::size_t image_side = 32;
  std::size_t image_channels = 3;
  std::size_t patch = 4;
  std::size_t features = 48;  // z
  std::size_t units = 16;     // S
  bool use_tail_interaction = true;
  std::size_t ti_blocks = 1;  // stacked (Q, I_k, I_v) blocks, applied in sequence
  std::size_t classes = 3;

  std::size_t tokens() const { return (image_side / patch) * (image_side / patch); }
  std::size_t patch_dim() const { return patch * patch * image_channels; }
};

/// Non-overlapping patch x patch tiles as rows of (row, col, channel)
/// values shifted to [-0.5, 0.5], tiles in raster order.
std::vector<double> patchify(const Image& img, std::size_t patch);

// Patch tokens -> linear(z) -> ReLU -> [Tail Interaction]* -> mean over
// tokens -> linear(K) -> softmax cross-entropy.
class Model {
 public:
  struct Cache {
    std::size_t batch = 0;
    std::vector<double> patches;  // (B*N) x P
    std::vector<double> embed_pre;  // (B*N) x z, before ReLU
    std::vector<TailInteraction::Cache> ti;
    std::vector<double> pooled;  // B x z
    std::vector<double> probs;   // B x K
  };

  Model(const ModelConfig& config, Rng& rng);

  const ModelConfig& config() const { return config_; }

  /// Logits, B x K.
  std::vector<double> forward(std::span<const Image* const> images, Cache* cache = nullptr) const;

  /// Mean cross-entropy of the batch; grads (same layout as
  /// parameter_blocks()) are overwritten.
  double loss_and_grad(std::span<const Image* const> images, std::span<const std::size_t> labels,
                       std::vector<std::vector<double>>& grads) const;

  double loss(std::span<const Image* const> images, std::span<const std::size_t> labels) const;

  std::vector<std::size_t> predict(std::span<const Image* const> images) const;

  /// Views of every learnable tensor: embed_w, embed_b, per block
  /// (query, key, value), head_w, head_b. Invalidates Tail Interaction
  /// caches.
  std::vector<std::span<double>> parameter_blocks();
  std::vector<std::string> parameter_names() const;
  std::size_t parameter_count() const;

 private:
  ModelConfig config_;
  std::vector<double> embed_w_;  // z x P
  std::vector<double> embed_b_;  // z
  std::vector<TailInteraction> ti_;
  std::vector<double> head_w_;  // K x z
  std::vector<double> head_b_;  // K
};

/// Mean cross-entropy and softmax probabilities for B x K logits.
double softmax_cross_entropy(std::span<const double> logits, std::span<const std::size_t> labels,
                             std::size_t classes, std::vector<double>* probs);

/// SGD with momentum and L2 weight decay (PyTorch update rule).
class Sgd {
 public:
  Sgd(double learning_rate, double momentum, double weight_decay, bool nesterov);

  void step(std::vector<std::span<double>> params, const std::vector<std::vector<double>>& grads);

 private:
  double lr_, momentum_, weight_decay_;
  bool nesterov_;
  std::vector<std::vector<double>> velocity_;
};

}  // namespace freqgen::harness

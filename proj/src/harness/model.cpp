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

#include "freqgen/harness/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "freqgen/error.hpp"
#include "freqgen/linalg.hpp"

namespace freqgen::harness {

std::vector<double> patchify(const Image& img, std::size_t patch) {
  const std::size_t gh = img.height() / patch, gw = img.width() / patch, ch = img.channels();
  std::vector<double> out;
  out.reserve(gh * gw * patch * patch * ch);
  for (std::size_t ty = 0; ty < gh; ++ty) {
    for (std::size_t tx = 0; tx < gw; ++tx) {
      for (std::size_t y = 0; y < patch; ++y) {
        for (std::size_t x = 0; x < patch; ++x) {
          for (std::size_t c = 0; c < ch; ++c) out.push_back(img.at(ty * patch + y, tx * patch + x, c) - 0.5);
        }
      }
    }
  }
  return out;
}

Model::Model(const ModelConfig& config, Rng& rng) : config_(config) {
  if (config.patch == 0 || config.image_side % config.patch != 0) {
    throw InvalidParameter("Model: image side must be a multiple of the patch size");
  }
  const std::size_t z = config.features, p = config.patch_dim(), k = config.classes;
  embed_w_.resize(z * p);
  const double embed_std = std::sqrt(2.0 / static_cast<double>(p));
  for (double& v : embed_w_) v = rng.normal(0.0, embed_std);
  embed_b_.assign(z, 0.0);
  if (config.use_tail_interaction) {
    for (std::size_t i = 0; i < config.ti_blocks; ++i) {
      ti_.emplace_back(InteractionParams::initialize(z, config.units, rng));
    }
  }
  head_w_.resize(k * z);
  const double head_std = 1.0 / std::sqrt(static_cast<double>(z));
  for (double& v : head_w_) v = rng.normal(0.0, head_std);
  head_b_.assign(k, 0.0);
}

std::vector<double> Model::forward(std::span<const Image* const> images, Cache* cache) const {
  const std::size_t b_count = images.size(), n = config_.tokens(), z = config_.features,
                    p = config_.patch_dim(), k = config_.classes;
  std::vector<double> patches;
  patches.reserve(b_count * n * p);
  for (const Image* img : images) {
    if (img->height() != config_.image_side || img->width() != config_.image_side ||
        img->channels() != config_.image_channels) {
      throw InvalidInput("Model::forward: image shape does not match the model");
    }
    const auto t = patchify(*img, config_.patch);
    patches.insert(patches.end(), t.begin(), t.end());
  }

  std::vector<double> pre(b_count * n * z);
  linalg::matmul_abt(patches, embed_w_, pre, b_count * n, p, z);
  FeatureMap h(b_count, n, z);
  for (std::size_t r = 0; r < b_count * n; ++r) {
    for (std::size_t c = 0; c < z; ++c) {
      double& v = pre[r * z + c];
      v += embed_b_[c];
      h.data[r * z + c] = v > 0.0 ? v : 0.0;
    }
  }

  std::vector<TailInteraction::Cache> ti_caches(cache != nullptr ? ti_.size() : 0);
  for (std::size_t i = 0; i < ti_.size(); ++i) {
    h = ti_[i].forward(h, cache != nullptr ? &ti_caches[i] : nullptr);
  }

  std::vector<double> pooled(b_count * z, 0.0);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t b = 0; b < b_count; ++b) {
    const auto item = h.item(b);
    for (std::size_t t = 0; t < n; ++t) {
      for (std::size_t c = 0; c < z; ++c) pooled[b * z + c] += item[t * z + c];
    }
    for (std::size_t c = 0; c < z; ++c) pooled[b * z + c] *= inv_n;
  }

  std::vector<double> logits(b_count * k);
  linalg::matmul_abt(pooled, head_w_, logits, b_count, z, k);
  for (std::size_t b = 0; b < b_count; ++b) {
    for (std::size_t c = 0; c < k; ++c) logits[b * k + c] += head_b_[c];
  }

  if (cache != nullptr) {
    cache->batch = b_count;
    cache->patches = std::move(patches);
    cache->embed_pre = std::move(pre);
    cache->ti = std::move(ti_caches);
    cache->pooled = std::move(pooled);
  }
  return logits;
}

double softmax_cross_entropy(std::span<const double> logits, std::span<const std::size_t> labels,
                             std::size_t classes, std::vector<double>* probs) {
  const std::size_t b_count = labels.size();
  if (logits.size() != b_count * classes) throw InvalidInput("softmax_cross_entropy: shape mismatch");
  if (probs != nullptr) probs->assign(logits.size(), 0.0);
  double total = 0.0;
  for (std::size_t b = 0; b < b_count; ++b) {
    const double* row = logits.data() + b * classes;
    const double mx = *std::max_element(row, row + classes);
    double sum = 0.0;
    for (std::size_t c = 0; c < classes; ++c) sum += std::exp(row[c] - mx);
    const double log_z = mx + std::log(sum);
    total += log_z - row[labels[b]];
    if (probs != nullptr) {
      for (std::size_t c = 0; c < classes; ++c) (*probs)[b * classes + c] = std::exp(row[c] - log_z);
    }
  }
  return b_count == 0 ? 0.0 : total / static_cast<double>(b_count);
}

double Model::loss(std::span<const Image* const> images, std::span<const std::size_t> labels) const {
  const auto logits = forward(images);
  return softmax_cross_entropy(logits, labels, config_.classes, nullptr);
}

double Model::loss_and_grad(std::span<const Image* const> images,
                            std::span<const std::size_t> labels,
                            std::vector<std::vector<double>>& grads) const {
  if (images.size() != labels.size() || images.empty()) {
    throw InvalidInput("Model::loss_and_grad: need one label per image");
  }
  Cache cache;
  const auto logits = forward(images, &cache);
  std::vector<double> probs;
  const double loss = softmax_cross_entropy(logits, labels, config_.classes, &probs);

  const std::size_t b_count = images.size(), n = config_.tokens(), z = config_.features,
                    p = config_.patch_dim(), k = config_.classes;
  grads.clear();
  grads.emplace_back(embed_w_.size(), 0.0);
  grads.emplace_back(embed_b_.size(), 0.0);
  for (const auto& layer : ti_) {
    grads.emplace_back(layer.params().query.size(), 0.0);
    grads.emplace_back(layer.params().key.size(), 0.0);
    grads.emplace_back(layer.params().value.size(), 0.0);
  }
  grads.emplace_back(head_w_.size(), 0.0);
  grads.emplace_back(head_b_.size(), 0.0);
  auto& g_head_w = grads[grads.size() - 2];
  auto& g_head_b = grads[grads.size() - 1];

  std::vector<double> d_logits(probs);
  const double inv_b = 1.0 / static_cast<double>(b_count);
  for (std::size_t b = 0; b < b_count; ++b) {
    d_logits[b * k + labels[b]] -= 1.0;
    for (std::size_t c = 0; c < k; ++c) d_logits[b * k + c] *= inv_b;
  }
  linalg::matmul_atb_acc(d_logits, cache.pooled, g_head_w, b_count, k, z);
  for (std::size_t b = 0; b < b_count; ++b) {
    for (std::size_t c = 0; c < k; ++c) g_head_b[c] += d_logits[b * k + c];
  }
  std::vector<double> d_pooled(b_count * z);
  linalg::matmul_ab(d_logits, head_w_, d_pooled, b_count, k, z);

  FeatureMap d_h(b_count, n, z);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t b = 0; b < b_count; ++b) {
    for (std::size_t t = 0; t < n; ++t) {
      for (std::size_t c = 0; c < z; ++c) d_h.at(b, t, c) = d_pooled[b * z + c] * inv_n;
    }
  }

  for (std::size_t i = ti_.size(); i-- > 0;) {
    auto g = ti_[i].backward(d_h, cache.ti[i]);
    grads[2 + 3 * i] = std::move(g.query);
    grads[2 + 3 * i + 1] = std::move(g.key);
    grads[2 + 3 * i + 2] = std::move(g.value);
    d_h = std::move(g.input);
  }

  std::vector<double> d_pre(b_count * n * z);
  for (std::size_t i = 0; i < d_pre.size(); ++i) {
    d_pre[i] = cache.embed_pre[i] > 0.0 ? d_h.data[i] : 0.0;
  }
  linalg::matmul_atb_acc(d_pre, cache.patches, grads[0], b_count * n, z, p);
  for (std::size_t r = 0; r < b_count * n; ++r) {
    for (std::size_t c = 0; c < z; ++c) grads[1][c] += d_pre[r * z + c];
  }
  return loss;
}

std::vector<std::size_t> Model::predict(std::span<const Image* const> images) const {
  const auto logits = forward(images);
  const std::size_t k = config_.classes;
  std::vector<std::size_t> out(images.size());
  for (std::size_t b = 0; b < images.size(); ++b) {
    const double* row = logits.data() + b * k;
    out[b] = static_cast<std::size_t>(std::max_element(row, row + k) - row);
  }
  return out;
}

std::vector<std::span<double>> Model::parameter_blocks() {
  std::vector<std::span<double>> blocks{embed_w_, embed_b_};
  for (auto& layer : ti_) {
    auto& p = layer.mutable_params();
    blocks.emplace_back(p.query);
    blocks.emplace_back(p.key);
    blocks.emplace_back(p.value);
  }
  blocks.emplace_back(head_w_);
  blocks.emplace_back(head_b_);
  return blocks;
}

std::vector<std::string> Model::parameter_names() const {
  std::vector<std::string> names{"embed_w", "embed_b"};
  for (std::size_t i = 0; i < ti_.size(); ++i) {
    const std::string prefix = "ti" + std::to_string(i) + ".";
    names.push_back(prefix + "query");
    names.push_back(prefix + "key");
    names.push_back(prefix + "value");
  }
  names.emplace_back("head_w");
  names.emplace_back("head_b");
  return names;
}

std::size_t Model::parameter_count() const {
  std::size_t total = embed_w_.size() + embed_b_.size() + head_w_.size() + head_b_.size();
  for (const auto& layer : ti_) total += layer.params().parameter_count();
  return total;
}

Sgd::Sgd(double learning_rate, double momentum, double weight_decay, bool nesterov)
    : lr_(learning_rate), momentum_(momentum), weight_decay_(weight_decay), nesterov_(nesterov) {}

void Sgd::step(std::vector<std::span<double>> params,
               const std::vector<std::vector<double>>& grads) {
  if (params.size() != grads.size()) throw InvalidInput("Sgd::step: block count mismatch");
  const bool first = velocity_.empty();
  if (first) {
    velocity_.resize(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) velocity_[i].assign(params[i].size(), 0.0);
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    auto p = params[i];
    const auto& g = grads[i];
    auto& buf = velocity_[i];
    for (std::size_t j = 0; j < p.size(); ++j) {
      double d = g[j] + weight_decay_ * p[j];
      if (momentum_ != 0.0) {
        buf[j] = first ? d : momentum_ * buf[j] + d;
        d = nesterov_ ? d + momentum_ * buf[j] : buf[j];
      }
      p[j] -= lr_ * d;
    }
  }
}

}  // namespace freqgen::harness

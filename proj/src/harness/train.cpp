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

#include "freqgen/harness/train.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "freqgen/error.hpp"
#include "freqgen/spatial_filter.hpp"

namespace freqgen::harness {
namespace {

template <typename T>
void shuffle(std::vector<T>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = rng.below(i);
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace

std::string to_string(Augmentation a) {
  switch (a) {
    case Augmentation::kNone:
      return "none";
    case Augmentation::kGaussian:
      return "gaussian";
    case Augmentation::kTwoStep:
      return "two_step";
  }
  return "none";
}

Augmentation parse_augmentation(const std::string& text) {
  if (text == "none") return Augmentation::kNone;
  if (text == "gaussian") return Augmentation::kGaussian;
  if (text == "two_step" || text == "two-step") return Augmentation::kTwoStep;
  throw InvalidParameter("unknown augmentation '" + text + "' (none|gaussian|two_step)");
}

ModelConfig ExperimentConfig::model_config() const {
  ModelConfig m;
  m.image_side = kImageSide;
  m.features = features;
  m.units = unit_size;
  m.use_tail_interaction = use_tail_interaction;
  m.ti_blocks = ti_blocks;
  m.classes = kClassCount;
  return m;
}

double Metrics::mean_held_out() const {
  if (folds.empty()) return 0.0;
  double s = 0.0;
  for (const auto& f : folds) s += f.held_out_accuracy;
  return s / static_cast<double>(folds.size());
}

double Metrics::mean_validation() const {
  if (folds.empty()) return 0.0;
  double s = 0.0;
  for (const auto& f : folds) s += f.validation_accuracy;
  return s / static_cast<double>(folds.size());
}

bool Metrics::failed() const {
  return std::any_of(folds.begin(), folds.end(), [](const FoldMetrics& f) { return f.failed; });
}

Image augment_for_training(const Image& img, const ExperimentConfig& config, Rng& rng) {
  switch (config.augmentation) {
    case Augmentation::kNone:
      return img;
    case Augmentation::kGaussian:
      return high_freq_for_network(img, config.kernel_size);
    case Augmentation::kTwoStep: {
      const std::size_t side = std::min(img.height(), img.width());
      AugmentParams p = sample_params(rng, side);
      if (config.severity) p.d = *config.severity * static_cast<double>(side);
      if (config.scale) p.alpha = p.beta = *config.scale;
      if (!config.use_amplitude_scaling) p.alpha = 1.0;
      if (!config.use_phase_scaling) p.beta = 1.0;
      return two_step_highpass(img, p);
    }
  }
  return img;
}

double accuracy(const Model& model, const std::vector<const DomainSample*>& samples) {
  if (samples.empty()) return 0.0;
  constexpr std::size_t kChunk = 64;
  std::size_t correct = 0;
  std::vector<const Image*> images;
  for (std::size_t start = 0; start < samples.size(); start += kChunk) {
    const std::size_t end = std::min(samples.size(), start + kChunk);
    images.clear();
    for (std::size_t i = start; i < end; ++i) images.push_back(&samples[i]->image);
    const auto pred = model.predict(images);
    for (std::size_t i = start; i < end; ++i) correct += pred[i - start] == samples[i]->label ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(samples.size());
}

FoldResult train_fold(const ExperimentConfig& config, const std::vector<DomainSample>& data,
                      std::size_t held_out) {
  if (config.batch_size == 0) throw InvalidParameter("batch_size must be positive");
  const std::uint64_t fold_seed = derive_seed(config.seed, held_out);

  std::vector<const DomainSample*> sources, target;
  for (const auto& s : data) (s.domain == held_out ? target : sources).push_back(&s);

  Rng split_rng(derive_seed(fold_seed, "split"));
  shuffle(sources, split_rng);
  const auto n_val = static_cast<std::size_t>(
      std::floor(config.validation_fraction * static_cast<double>(sources.size())));
  std::vector<const DomainSample*> val(sources.begin(), sources.begin() + static_cast<std::ptrdiff_t>(n_val));
  std::vector<const DomainSample*> train_set(sources.begin() + static_cast<std::ptrdiff_t>(n_val), sources.end());

  Rng init_rng(derive_seed(fold_seed, "init"));
  Model model(config.model_config(), init_rng);
  Sgd sgd(config.learning_rate, config.momentum, config.weight_decay, config.nesterov);

  FoldResult result{FoldMetrics{}, model};
  result.metrics.held_out_domain = held_out;
  double best_val = -1.0;

  Rng order_rng(derive_seed(fold_seed, "order"));
  const std::uint64_t aug_seed = derive_seed(fold_seed, "augment");
  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);

  std::vector<Image> augmented;
  std::vector<const Image*> batch;
  std::vector<std::size_t> labels;
  std::vector<std::vector<double>> grads;

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    shuffle(order, order_rng);
    double loss_sum = 0.0;
    std::size_t loss_count = 0;
    bool diverged = false;
    for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      batch.clear();
      labels.clear();
      augmented.clear();
      augmented.reserve(end - start);
      for (std::size_t i = start; i < end; ++i) {
        batch.push_back(&train_set[order[i]]->image);
        labels.push_back(train_set[order[i]]->label);
      }
      if (config.augmentation != Augmentation::kNone) {
        for (std::size_t i = start; i < end; ++i) {
          Rng rng(derive_seed(aug_seed, epoch * 1'000'003ULL + order[i]));
          augmented.push_back(augment_for_training(train_set[order[i]]->image, config, rng));
          labels.push_back(train_set[order[i]]->label);
        }
        for (const auto& img : augmented) batch.push_back(&img);
      }
      const double loss = model.loss_and_grad(batch, labels, grads);
      if (!std::isfinite(loss)) {
        diverged = true;
        break;
      }
      loss_sum += loss * static_cast<double>(batch.size());
      loss_count += batch.size();
      sgd.step(model.parameter_blocks(), grads);
    }
    if (diverged) {
      result.metrics.failed = true;
      result.metrics.loss_curve.push_back(std::nan(""));
      break;
    }
    result.metrics.loss_curve.push_back(loss_sum / static_cast<double>(std::max<std::size_t>(loss_count, 1)));

    const double val_acc = accuracy(model, val);
    if (val_acc >= best_val) {
      best_val = val_acc;
      result.model = model;
      result.metrics.best_epoch = epoch;
      result.metrics.validation_accuracy = val_acc;
    }
  }
  result.metrics.held_out_accuracy = result.metrics.failed ? 0.0 : accuracy(result.model, target);
  return result;
}

Metrics train(const ExperimentConfig& config) {
  for (std::size_t d : config.held_out_domains) {
    if (d >= kDomainCount) throw InvalidParameter("held-out domain out of range");
  }
  SynthOptions options;
  options.spurious_rate = config.spurious_rate;
  const auto data = synth_dataset(derive_seed(config.seed, "data"), config.samples_per_class, options);
  Metrics metrics{config.name, config.seed, {}};
  for (std::size_t d : config.held_out_domains) {
    metrics.folds.push_back(train_fold(config, data, d).metrics);
  }
  return metrics;
}

std::vector<ExperimentConfig> ablation_grid(const ExperimentConfig& base) {
  auto make = [&](const std::string& name, bool hp, bool ps, bool as, bool ti) {
    ExperimentConfig c = base;
    c.name = name;
    c.augmentation = hp ? Augmentation::kTwoStep : Augmentation::kNone;
    c.use_phase_scaling = ps;
    c.use_amplitude_scaling = as;
    c.use_tail_interaction = ti;
    return c;
  };
  return {
      make("baseline", false, false, false, false),
      make("hp", true, false, false, false),
      make("hp+ti", true, false, false, true),
      make("hp+as+ti", true, false, true, true),
      make("hp+ps+ti", true, true, false, true),
      make("hp+ps+as", true, true, true, false),
      make("hp+ps+as+ti", true, true, true, true),
  };
}

}  // namespace freqgen::harness

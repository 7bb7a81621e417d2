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

#include "freqgen/harness/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>

#include "freqgen/harness/model.hpp"
#include "freqgen/rng.hpp"
#include "freqgen/tail_interaction.hpp"

namespace freqgen::harness {
namespace {

GradCheckEntry compare(const std::string& name, std::span<double> values,
                       std::span<const double> analytic, double epsilon,
                       const std::function<double()>& loss) {
  GradCheckEntry entry{name, 0.0, 0.0};
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double saved = values[i];
    values[i] = saved + epsilon;
    const double up = loss();
    values[i] = saved - epsilon;
    const double down = loss();
    values[i] = saved;
    const double numeric = (up - down) / (2.0 * epsilon);
    entry.max_rel_error = std::max(entry.max_rel_error, relative_error(analytic[i], numeric));
    entry.max_abs_error = std::max(entry.max_abs_error, std::abs(analytic[i] - numeric));
  }
  return entry;
}

}  // namespace

double GradCheckReport::worst() const {
  double w = 0.0;
  for (const auto& e : entries) w = std::max(w, e.max_rel_error);
  return w;
}

double relative_error(double analytic, double numeric) {
  const double scale = std::max({std::abs(analytic), std::abs(numeric), kGradCheckFloor});
  return std::abs(analytic - numeric) / scale;
}

GradCheckReport check_layer_gradients(std::uint64_t seed, double epsilon) {
  constexpr std::size_t kB = 2, kN = 5, kS = 4, kZ = 3;
  Rng rng(seed);
  InteractionParams params = InteractionParams::initialize(kZ, kS, rng);
  for (double& v : params.query) v += rng.normal(0.0, 0.5);
  FeatureMap input(kB, kN, kZ);
  for (double& v : input.data) v = rng.normal();

  TailInteraction layer(params);
  auto half_sq = [](const FeatureMap& y) {
    double s = 0.0;
    for (double v : y.data) s += v * v;
    return 0.5 * s;
  };

  TailInteraction::Cache cache;
  const FeatureMap y = layer.forward(input, &cache);
  const auto grads = layer.backward(y, cache);  // d(0.5||y||^2)/dy = y

  GradCheckReport report;
  auto loss = [&]() { return half_sq(layer.forward(input)); };
  report.entries.push_back(compare("input", input.data, grads.input.data, epsilon, loss));
  report.entries.push_back(
      compare("query", layer.mutable_params().query, grads.query, epsilon, loss));
  report.entries.push_back(compare("key", layer.mutable_params().key, grads.key, epsilon, loss));
  report.entries.push_back(
      compare("value", layer.mutable_params().value, grads.value, epsilon, loss));
  return report;
}

GradCheckReport check_model_gradients(std::uint64_t seed, double epsilon) {
  ModelConfig config;
  config.image_side = 8;
  config.patch = 4;
  config.features = 6;
  config.units = 3;
  config.use_tail_interaction = true;
  Rng rng(seed);
  Model model(config, rng);

  std::vector<Image> images;
  std::vector<std::size_t> labels;
  for (std::size_t i = 0; i < 4; ++i) {
    Image img(config.image_side, config.image_side, 3);
    for (double& v : img.data()) v = rng.uniform();
    images.push_back(std::move(img));
    labels.push_back(rng.below(config.classes));
  }
  std::vector<const Image*> batch;
  for (const auto& img : images) batch.push_back(&img);

  std::vector<std::vector<double>> grads;
  model.loss_and_grad(batch, labels, grads);

  GradCheckReport report;
  const auto names = model.parameter_names();
  auto blocks = model.parameter_blocks();
  auto loss = [&]() { return model.loss(batch, labels); };
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    report.entries.push_back(compare(names[i], blocks[i], grads[i], epsilon, loss));
  }
  return report;
}

}  // namespace freqgen::harness

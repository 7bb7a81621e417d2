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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "freqgen/error.hpp"
#include "freqgen/harness/dataset.hpp"
#include "freqgen/harness/gradcheck.hpp"
#include "freqgen/harness/model.hpp"
#include "freqgen/harness/report.hpp"
#include "freqgen/harness/train.hpp"
#include "freqgen/rng.hpp"
#include "freqgen/spatial_filter.hpp"
#include "freqgen/spectral_filter.hpp"

using namespace freqgen;
using namespace freqgen::harness;

namespace {

ExperimentConfig tiny_config() {
  ExperimentConfig c;
  c.name = "tiny";
  c.epochs = 2;
  c.samples_per_class = 6;
  c.batch_size = 8;
  c.held_out_domains = {0, 3};
  return c;
}

// Multinomial logistic regression on a handful of features, trained by
// full-batch gradient descent. Deliberately independent of the library.
struct Logistic {
  std::size_t dims, classes;
  std::vector<double> w;  // classes x (dims + 1)

  Logistic(std::size_t d, std::size_t k) : dims(d), classes(k), w(k * (d + 1), 0.0) {}

  std::vector<double> probs(const std::vector<double>& x) const {
    std::vector<double> z(classes);
    for (std::size_t c = 0; c < classes; ++c) {
      z[c] = w[c * (dims + 1) + dims];
      for (std::size_t i = 0; i < dims; ++i) z[c] += w[c * (dims + 1) + i] * x[i];
    }
    const double mx = *std::max_element(z.begin(), z.end());
    double s = 0.0;
    for (double& v : z) s += (v = std::exp(v - mx));
    for (double& v : z) v /= s;
    return z;
  }

  void fit(const std::vector<std::vector<double>>& xs, const std::vector<std::size_t>& ys) {
    for (int it = 0; it < 3000; ++it) {
      std::vector<double> g(w.size(), 0.0);
      for (std::size_t n = 0; n < xs.size(); ++n) {
        auto p = probs(xs[n]);
        p[ys[n]] -= 1.0;
        for (std::size_t c = 0; c < classes; ++c) {
          for (std::size_t i = 0; i < dims; ++i) g[c * (dims + 1) + i] += p[c] * xs[n][i];
          g[c * (dims + 1) + dims] += p[c];
        }
      }
      for (std::size_t i = 0; i < w.size(); ++i) w[i] -= 5.0 * g[i] / static_cast<double>(xs.size());
    }
  }

  std::size_t predict(const std::vector<double>& x) const {
    const auto p = probs(x);
    return static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
  }
};

// Mean color over the pixels that the foreground-only rendering leaves at
// the neutral background.
std::vector<double> background_mean(const Image& img, const Image& fg_only) {
  std::vector<double> m(3, 0.0);
  double count = 0.0;
  for (std::size_t y = 0; y < img.height(); ++y) {
    for (std::size_t x = 0; x < img.width(); ++x) {
      if (fg_only.at(y, x, 0) != 0.5 || fg_only.at(y, x, 1) != 0.5 || fg_only.at(y, x, 2) != 0.5) continue;
      for (std::size_t c = 0; c < 3; ++c) m[c] += img.at(y, x, c);
      count += 1.0;
    }
  }
  for (double& v : m) v /= count;
  return m;
}

}  // namespace

TEST_CASE("dataset shape, ranges and ordering") {
  const auto data = synth_dataset(3, 5);
  REQUIRE(data.size() == kDomainCount * kClassCount * 5);
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& s = data[i];
    CHECK(s.image.height() == 32);
    CHECK(s.image.width() == 32);
    CHECK(s.image.channels() == 3);
    CHECK(s.domain == i / (kClassCount * 5));
    CHECK(s.label == (i / 5) % kClassCount);
    for (double v : s.image.data()) {
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
}

TEST_CASE("dataset is a pure function of the seed") {
  const auto a = synth_dataset(21, 4);
  const auto b = synth_dataset(21, 4);
  const auto c = synth_dataset(22, 4);
  bool same = true, differs = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    same = same && a[i].image == b[i].image;
    differs = differs || !(a[i].image == c[i].image);
  }
  CHECK(same);
  CHECK(differs);
  // Growing n keeps the existing samples.
  const auto big = synth_dataset(21, 6);
  CHECK(big[0].image == a[0].image);
  CHECK(big[6].image == a[4].image);
}

TEST_CASE("foreground geometry does not depend on the domain nuisance") {
  SynthOptions fg;
  fg.foreground_only = true;
  const auto plain = synth_dataset(5, 3);
  const auto masks = synth_dataset(5, 3, fg);
  for (std::size_t i = 0; i < plain.size(); ++i) {
    // Foreground-only renders keep a neutral gray background.
    CHECK(masks[i].image.at(0, 0, 0) == 0.5);
    CHECK(masks[i].label == plain[i].label);
  }
}

TEST_CASE("background color predicts the class within a domain but not across") {
  SynthOptions fg;
  fg.foreground_only = true;
  const auto data = synth_dataset(17, 60);
  const auto masks = synth_dataset(17, 60, fg);
  std::vector<std::vector<std::vector<double>>> xs(kDomainCount);
  std::vector<std::vector<std::size_t>> ys(kDomainCount);
  for (std::size_t i = 0; i < data.size(); ++i) {
    xs[data[i].domain].push_back(background_mean(data[i].image, masks[i].image));
    ys[data[i].domain].push_back(data[i].label);
  }
  double cross_total = 0.0;
  int cross_count = 0;
  for (std::size_t d = 0; d < kDomainCount; ++d) {
    // Even indices train, odd indices test.
    std::vector<std::vector<double>> tx, vx;
    std::vector<std::size_t> ty, vy;
    for (std::size_t i = 0; i < xs[d].size(); ++i) {
      (i % 2 == 0 ? tx : vx).push_back(xs[d][i]);
      (i % 2 == 0 ? ty : vy).push_back(ys[d][i]);
    }
    Logistic lr(3, kClassCount);
    lr.fit(tx, ty);
    std::size_t hit = 0;
    for (std::size_t i = 0; i < vx.size(); ++i) hit += lr.predict(vx[i]) == vy[i] ? 1 : 0;
    const double in_domain = static_cast<double>(hit) / static_cast<double>(vx.size());
    CAPTURE(d);
    CHECK(in_domain > 0.9);
    for (std::size_t e = 0; e < kDomainCount; ++e) {
      if (e == d) continue;
      std::size_t h2 = 0;
      for (std::size_t i = 0; i < xs[e].size(); ++i) h2 += lr.predict(xs[e][i]) == ys[e][i] ? 1 : 0;
      cross_total += static_cast<double>(h2) / static_cast<double>(xs[e].size());
      ++cross_count;
    }
  }
  CHECK(cross_total / cross_count <= 1.0 / 3.0 + 0.15);
}

TEST_CASE("patchify orders tiles in raster order and centers values") {
  Image img(4, 4, 1);
  for (std::size_t y = 0; y < 4; ++y) {
    for (std::size_t x = 0; x < 4; ++x) img.at(y, x) = static_cast<double>(y * 4 + x) / 16.0;
  }
  const auto p = patchify(img, 2);
  REQUIRE(p.size() == 16);
  // Tile 1 is the top-right 2x2 block: pixels 2, 3, 6, 7.
  CHECK(p[4] == 2.0 / 16.0 - 0.5);
  CHECK(p[5] == 3.0 / 16.0 - 0.5);
  CHECK(p[6] == 6.0 / 16.0 - 0.5);
  CHECK(p[7] == 7.0 / 16.0 - 0.5);
}

TEST_CASE("model outputs one row of logits per image") {
  Rng rng(1);
  ModelConfig cfg;
  cfg.use_tail_interaction = true;
  const Model model(cfg, rng);
  const auto data = synth_dataset(2, 2);
  std::vector<const Image*> batch;
  for (const auto& s : data) batch.push_back(&s.image);
  const auto logits = model.forward(batch);
  CHECK(logits.size() == batch.size() * 3);
  for (double v : logits) CHECK(std::isfinite(v));
  std::vector<double> probs;
  std::vector<std::size_t> labels(batch.size(), 0);
  softmax_cross_entropy(logits, labels, 3, &probs);
  for (std::size_t b = 0; b < batch.size(); ++b) {
    CHECK(probs[b * 3] + probs[b * 3 + 1] + probs[b * 3 + 2] == doctest::Approx(1.0).epsilon(1e-14));
  }
  const Image wrong(16, 16, 3);
  const Image* bad[] = {&wrong};
  CHECK_THROWS_AS(model.forward(bad), InvalidInput);
}

TEST_CASE("cross-entropy of equal logits is log K") {
  const std::vector<double> logits(6, 0.25);
  const std::vector<std::size_t> labels = {0, 2};
  CHECK(softmax_cross_entropy(logits, labels, 3, nullptr) == doctest::Approx(std::log(3.0)).epsilon(1e-15));
}

TEST_CASE("disabling Tail Interaction removes exactly its parameters") {
  ModelConfig with;
  with.use_tail_interaction = true;
  ModelConfig without = with;
  without.use_tail_interaction = false;
  Rng r1(1), r2(1);
  const Model a(with, r1), b(without, r2);
  const std::size_t z = with.features, s = with.units;
  CHECK(a.parameter_count() - b.parameter_count() == z * z + 2 * s * z);
  CHECK(b.parameter_count() == z * (with.patch_dim() + 1) + with.classes * (z + 1));
  CHECK(a.parameter_names().size() == 7);
  CHECK(b.parameter_names().size() == 4);
}

TEST_CASE("whole-model gradients match finite differences") {
  for (std::uint64_t seed : {1, 7, 19}) {
    CAPTURE(seed);
    const auto report = check_model_gradients(seed);
    CHECK(report.entries.size() == 7);
    for (const auto& e : report.entries) {
      CAPTURE(e.name);
      CHECK(e.max_rel_error < 1e-5);
    }
    CHECK(report.passed());
  }
}

TEST_CASE("relative error uses a floor for vanishing gradients") {
  CHECK(relative_error(1.0, 1.0) == 0.0);
  CHECK(relative_error(2.0, 1.0) == 0.5);
  CHECK(relative_error(0.0, 1e-12) == doctest::Approx(1e-12 / kGradCheckFloor));
}

TEST_CASE("SGD follows the Nesterov momentum rule with decoupled buffers") {
  std::vector<double> p = {1.0, -2.0};
  Sgd sgd(0.1, 0.9, 0.01, true);
  const std::vector<std::vector<double>> g = {{0.5, 0.25}};
  sgd.step({std::span<double>(p)}, g);
  // First step: buf = d = g + wd * p; update d + m * buf.
  const double d0 = 0.5 + 0.01 * 1.0, d1 = 0.25 + 0.01 * -2.0;
  const double p0 = 1.0 - 0.1 * (d0 + 0.9 * d0), p1 = -2.0 - 0.1 * (d1 + 0.9 * d1);
  CHECK(p[0] == doctest::Approx(p0).epsilon(1e-15));
  CHECK(p[1] == doctest::Approx(p1).epsilon(1e-15));
  sgd.step({std::span<double>(p)}, g);
  const double e0 = 0.5 + 0.01 * p0;
  const double buf0 = 0.9 * d0 + e0;
  CHECK(p[0] == doctest::Approx(p0 - 0.1 * (e0 + 0.9 * buf0)).epsilon(1e-15));

  std::vector<double> q = {1.0};
  Sgd plain(0.1, 0.0, 0.0, false);
  plain.step({std::span<double>(q)}, {{2.0}});
  CHECK(q[0] == doctest::Approx(0.8).epsilon(1e-15));
}

TEST_CASE("augmentation dispatch") {
  const auto data = synth_dataset(4, 1);
  const Image& img = data[0].image;
  ExperimentConfig c;
  Rng rng(1);
  c.augmentation = Augmentation::kNone;
  CHECK(augment_for_training(img, c, rng) == img);
  c.augmentation = Augmentation::kGaussian;
  c.kernel_size = 7;
  CHECK(augment_for_training(img, c, rng) == high_freq_for_network(img, 7));

  c.augmentation = Augmentation::kTwoStep;
  c.severity = 0.05;
  c.scale = 0.8;
  CHECK(augment_for_training(img, c, rng) == two_step_highpass(img, {1.6, 0.8, 0.8}));
  c.use_phase_scaling = false;
  CHECK(augment_for_training(img, c, rng) == two_step_highpass(img, {1.6, 0.8, 1.0}));
  c.use_amplitude_scaling = false;
  CHECK(augment_for_training(img, c, rng) == two_step_highpass(img, {1.6, 1.0, 1.0}));
}

TEST_CASE("augmentation names parse both spellings") {
  CHECK(parse_augmentation("two-step") == Augmentation::kTwoStep);
  CHECK(parse_augmentation("two_step") == Augmentation::kTwoStep);
  CHECK(parse_augmentation("gaussian") == Augmentation::kGaussian);
  CHECK(parse_augmentation("none") == Augmentation::kNone);
  CHECK(to_string(Augmentation::kTwoStep) == "two_step");
  CHECK_THROWS_AS(parse_augmentation("blur"), InvalidParameter);
}

TEST_CASE("training is reproducible and reports every requested fold") {
  ExperimentConfig c = tiny_config();
  c.augmentation = Augmentation::kTwoStep;
  c.use_tail_interaction = true;
  const Metrics a = train(c), b = train(c);
  REQUIRE(a.folds.size() == 2);
  CHECK(a.folds[0].held_out_domain == 0);
  CHECK(a.folds[1].held_out_domain == 3);
  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(a.folds[i].held_out_accuracy == b.folds[i].held_out_accuracy);
    CHECK(a.folds[i].validation_accuracy == b.folds[i].validation_accuracy);
    CHECK(a.folds[i].loss_curve == b.folds[i].loss_curve);
    CHECK(a.folds[i].loss_curve.size() == 2);
    CHECK(a.folds[i].held_out_accuracy >= 0.0);
    CHECK(a.folds[i].held_out_accuracy <= 1.0);
  }
  c.seed = 2;
  const Metrics other = train(c);
  CHECK(other.folds[0].loss_curve != a.folds[0].loss_curve);
}

TEST_CASE("divergence is reported as a failed fold") {
  ExperimentConfig c = tiny_config();
  c.learning_rate = 1e12;
  c.momentum = 0.0;
  c.weight_decay = 0.0;
  c.epochs = 4;
  const Metrics m = train(c);
  CHECK(m.failed());
  for (const auto& f : m.folds) {
    if (f.failed) CHECK(f.held_out_accuracy == 0.0);
  }
}

TEST_CASE("invalid experiment settings are rejected") {
  ExperimentConfig c = tiny_config();
  c.held_out_domains = {4};
  CHECK_THROWS_AS(train(c), InvalidParameter);
}

TEST_CASE("baseline learns the source domains in ten epochs") {
  ExperimentConfig c;
  c.name = "baseline";
  c.epochs = 10;
  c.held_out_domains = {2};
  const Metrics m = train(c);
  CHECK(m.folds[0].validation_accuracy > 0.8);
  const auto& curve = m.folds[0].loss_curve;
  std::size_t non_increasing = 0;
  for (std::size_t e = 1; e < curve.size(); ++e) non_increasing += curve[e] <= curve[e - 1] ? 1 : 0;
  CHECK(static_cast<double>(non_increasing) >= 0.9 * static_cast<double>(curve.size() - 1));
}

TEST_CASE("foreground-only evaluation erases most of the cross-domain deficit") {
  ExperimentConfig c;
  c.epochs = 20;
  c.learning_rate = 0.1;
  const auto data = synth_dataset(derive_seed(c.seed, "data"), c.samples_per_class);
  SynthOptions fg;
  fg.foreground_only = true;
  const auto masks = synth_dataset(derive_seed(c.seed, "data"), c.samples_per_class, fg);
  double deficit = 0.0, remaining = 0.0;
  for (std::size_t d = 0; d < kDomainCount; ++d) {
    const FoldResult r = train_fold(c, data, d);
    std::vector<const DomainSample*> held, held_fg;
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (data[i].domain != d) continue;
      held.push_back(&data[i]);
      held_fg.push_back(&masks[i]);
    }
    deficit += r.metrics.validation_accuracy - accuracy(r.model, held);
    remaining += r.metrics.validation_accuracy - accuracy(r.model, held_fg);
  }
  CAPTURE(deficit);
  CAPTURE(remaining);
  CHECK(deficit > 0.0);
  CHECK(remaining < 0.5 * deficit);
}

TEST_CASE("ablation grid covers the seven component combinations") {
  ExperimentConfig base;
  base.epochs = 3;
  const auto grid = ablation_grid(base);
  REQUIRE(grid.size() == 7);
  const char* names[] = {"baseline", "hp", "hp+ti", "hp+as+ti", "hp+ps+ti", "hp+ps+as", "hp+ps+as+ti"};
  for (std::size_t i = 0; i < 7; ++i) {
    CHECK(grid[i].name == names[i]);
    CHECK(grid[i].epochs == 3);
    const std::string n = std::string("+") + names[i] + "+";
    CHECK((grid[i].augmentation == Augmentation::kTwoStep) == (n != "+baseline+"));
    CHECK(grid[i].use_tail_interaction == (n.find("+ti+") != std::string::npos));
    CHECK(grid[i].use_phase_scaling == (n.find("+ps+") != std::string::npos));
    CHECK(grid[i].use_amplitude_scaling == (n.find("+as+") != std::string::npos));
  }
}

TEST_CASE("ablation report averages folds per seed, then seeds") {
  std::vector<MetricRow> rows;
  const double seed_means[] = {0.5, 0.6, 0.7, 0.8, 0.9};
  for (int cfg = 0; cfg < 6; ++cfg) {
    for (std::uint64_t s = 0; s < 5; ++s) {
      // Two folds straddling the per-seed mean.
      rows.push_back({"c" + std::to_string(cfg), s, "solid", seed_means[s] - 0.1});
      rows.push_back({"c" + std::to_string(cfg), s, "noise", seed_means[s] + 0.1});
    }
  }
  const auto report = ablation_report(rows);
  REQUIRE(report.size() == 6);
  for (const auto& r : report) {
    CHECK(r.seeds == 5);
    CHECK(r.mean == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(r.stddev == doctest::Approx(std::sqrt(0.025)).epsilon(1e-12));
  }
  std::ostringstream csv;
  write_ablation_csv(report, csv);
  const std::string text = csv.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 7);
  CHECK(text.rfind("config,seeds,mean,std\n", 0) == 0);
  CHECK(format_ablation_table(report).find("c5") != std::string::npos);
}

TEST_CASE("metrics CSV layout") {
  Metrics m{"cfg", 3, {}};
  FoldMetrics f;
  f.held_out_domain = 1;
  f.held_out_accuracy = 0.25;
  m.folds.push_back(f);
  auto rows = metric_rows(m);
  rows.push_back(mean_row(m, "cfg"));
  std::ostringstream out;
  write_metrics_csv(rows, out);
  CHECK(out.str() == "config,seed,held_out_domain,accuracy\ncfg,3,gradient,0.250000\ncfg,3,mean,0.250000\n");
}

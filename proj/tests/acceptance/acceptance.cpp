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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if
// any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#ifdef __GLIBC__
#include <malloc.h>
#endif

#include "freqgen/cli/commands.hpp"
#include "freqgen/fft.hpp"
#include "freqgen/harness/gradcheck.hpp"
#include "freqgen/harness/train.hpp"
#include "freqgen/raster.hpp"
#include "freqgen/rng.hpp"
#include "freqgen/spatial_filter.hpp"
#include "freqgen/spectral_filter.hpp"
#include "freqgen/tail_interaction.hpp"
#include "support/oracles.hpp"
#include "support/temp_dir.hpp"

namespace {

using namespace freqgen;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

// Pinned tolerances and budgets.
constexpr double kDftTol = 1e-9;
constexpr double kDftSeconds = 1.0;
constexpr double kIdentityTol = 1e-6;
constexpr double kIdentitySeconds = 1.0;
constexpr double kEnergyRelTol = 1e-9;
constexpr double kKernelSumTol = 1e-12;
constexpr double kLowpassTol = 1e-10;
constexpr double kRowSumTol = 1e-9;
constexpr double kWorkedExampleTol = 1e-12;
constexpr int kDualNormTrials = 10000;
constexpr double kGradTol = 1e-5;
constexpr double kGradEpsilon = 1e-4;
constexpr double kGradSeconds = 30.0;
constexpr double kComplexityRatio = 2.6;
constexpr std::size_t kComplexityRepeats = 20;
constexpr double kMinGain = 0.05;
constexpr std::size_t kSeeds = 5;
constexpr double kExperimentSeconds = 600.0;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, a);
  return buf;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<double> uniform(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform();
  return v;
}

Outcome dft_correctness() {
  Outcome o;
  const auto t0 = Clock::now();
  Rng rng(101);
  double worst = 0.0;
  for (std::size_t side : {8, 16}) {
    std::vector<cplx> x(side * side);
    for (auto& c : x) c = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    auto fast = x;
    fft::forward_2d(fast, side, side);
    const auto slow = testing::naive_dft2(x, side, side);
    for (std::size_t i = 0; i < x.size(); ++i) worst = std::max(worst, std::abs(fast[i] - slow[i]));
  }
  std::vector<cplx> y(64 * 64);
  for (auto& c : y) c = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
  auto round = y;
  fft::forward_2d(round, 64, 64);
  fft::inverse_2d(round, 64, 64);
  double trip = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) trip = std::max(trip, std::abs(round[i] - y[i]));
  const double t = seconds_since(t0);
  o.detail = "vs naive " + fmt("%.2e", worst) + ", roundtrip " + fmt("%.2e", trip) + ", " + fmt("%.3fs", t);
  o.require(worst <= kDftTol && trip <= kDftTol, "tolerance exceeded");
  o.require(t < kDftSeconds, "too slow");
  return o;
}

Outcome pipeline_identity() {
  Outcome o;
  Rng rng(202);
  const Image img(224, 224, 3, uniform(rng, 224 * 224 * 3));
  const auto t0 = Clock::now();
  const TwoStepRaw raw = two_step_highpass_raw(img, {0.0, 1.0, 1.0});
  const double t = seconds_since(t0);
  double worst = 0.0;
  for (std::size_t i = 0; i < raw.real.size(); ++i) worst = std::max(worst, std::abs(raw.real[i] - img.data()[i]));
  o.detail = "max-abs " + fmt("%.2e", worst) + ", " + fmt("%.3fs", t) + " per 224x224";
  o.require(worst <= kIdentityTol, "tolerance exceeded");
  o.require(t < kIdentitySeconds, "too slow");
  return o;
}

Outcome energy_scaling() {
  Outcome o;
  Rng rng(303);
  const Image img(64, 64, 3, uniform(rng, 64 * 64 * 3));
  double worst = 0.0;
  for (double d : {0.0, 3.0}) {
    for (double beta : kScalingLevels) {
      auto energy = [&](double alpha) {
        const TwoStepRaw raw = two_step_highpass_raw(img, {d, alpha, beta});
        double e = 0.0;
        for (double v : raw.real) e += v * v;
        return e;
      };
      const double ref = energy(1.0);
      for (double alpha : kScalingLevels) {
        worst = std::max(worst, std::abs(energy(alpha) / ref - alpha * alpha) / (alpha * alpha));
      }
    }
  }
  o.detail = "worst rel. error " + fmt("%.2e", worst);
  o.require(worst < kEnergyRelTol, "tolerance exceeded");
  return o;
}

Outcome mask_semantics() {
  Outcome o;
  std::size_t bins = 0, halves = 0, mismatches = 0;
  for (std::size_t h : {8, 13, 16, 31, 32, 64}) {
    for (std::size_t w : {8, 16, 33, 64}) {
      for (double d : {0.0, 1.0, 2.0, 2.5, 3.0, 5.0, 2.24, 11.2}) {
        const FilterMask m = highpass_mask(h, w, d);
        const double ch = static_cast<double>(h / 2), cw = static_cast<double>(w / 2);
        for (std::size_t u = 0; u < h; ++u) {
          for (std::size_t v = 0; v < w; ++v) {
            const double dist = std::hypot(static_cast<double>(u) - ch, static_cast<double>(v) - cw);
            const double expect = d == 0.0 ? 1.0 : 0.5 * (1.0 + testing::sgn(dist - d));
            ++bins;
            halves += expect == 0.5 ? 1 : 0;
            mismatches += m.at(u, v) != expect ? 1 : 0;
          }
        }
      }
    }
  }
  const auto diam = severity_diameters(224);
  const std::array<double, 5> want = {2.24, 4.48, 6.72, 8.96, 11.2};
  bool diam_ok = true;
  for (std::size_t i = 0; i < 5; ++i) diam_ok = diam_ok && std::abs(diam[i] - want[i]) <= 1e-12;
  o.detail = std::to_string(bins) + " bins, " + std::to_string(halves) + " on the boundary, " +
             std::to_string(mismatches) + " mismatches; diameters " + (diam_ok ? "ok" : "wrong");
  o.require(mismatches == 0, "mask mismatch");
  o.require(halves > 0, "boundary case never exercised");
  o.require(diam_ok, "default diameters");
  return o;
}

Outcome gaussian_path() {
  Outcome o;
  double sum_err = 0.0;
  for (std::size_t k : {1, 3, 7, 21, 35, 57, 63, 67}) {
    const GaussianKernel g = gaussian_kernel(k, sigma_for_kernel_size(k));
    double s = 0.0;
    for (double v : g.weights()) s += v;
    sum_err = std::max(sum_err, std::abs(s - 1.0));
  }
  double hf_max = 0.0;
  for (double level : {0.0, 0.3, 1.0}) {
    const Image flat(40, 40, 3, std::vector<double>(40 * 40 * 3, level));
    const GrayImage hf = high_freq(flat, kDefaultKernelSize);
    for (double v : hf.data()) hf_max = std::max(hf_max, std::abs(v));
  }
  Rng rng(505);
  double lp_err = 0.0;
  for (std::size_t k : {3, 7, 21, 63}) {
    const auto plane = uniform(rng, 16 * 16);
    const GaussianKernel g = gaussian_kernel(k, sigma_for_kernel_size(k));
    const GrayImage out = lowpass(GrayImage(16, 16, plane), g);
    const auto ref = testing::naive_filter2d(plane, 16, 16, testing::naive_gaussian(k, sigma_for_kernel_size(k)), k);
    for (std::size_t i = 0; i < ref.size(); ++i) lp_err = std::max(lp_err, std::abs(out.data()[i] - ref[i]));
  }
  o.detail = "sum err " + fmt("%.1e", sum_err) + ", constant hf " + fmt("%.1e", hf_max) + ", lowpass " +
             fmt("%.1e", lp_err) + ", default size " + std::to_string(kDefaultKernelSize);
  o.require(sum_err <= kKernelSumTol, "kernel sum");
  o.require(hf_max == 0.0, "constant image high frequencies not zero");
  o.require(lp_err <= kLowpassTol, "lowpass vs naive");
  o.require(kDefaultKernelSize == 63, "default kernel size");
  return o;
}

Outcome dual_normalization() {
  Outcome o;
  Rng rng(606);
  double worst_sum = 0.0, most_negative = 0.0;
  for (int t = 0; t < kDualNormTrials; ++t) {
    const std::size_t n = 1 + rng.below(32), s = 1 + rng.below(32);
    std::vector<double> m(n * s);
    const double scale = t % 10 == 0 ? 50.0 : 3.0;
    for (double& v : m) v = rng.normal(0.0, scale);
    const auto a = dual_normalize(m, n, s);
    for (std::size_t i = 0; i < n; ++i) {
      double sum = 0.0;
      for (std::size_t j = 0; j < s; ++j) {
        const double v = a[i * s + j];
        most_negative = std::min(most_negative, std::isnan(v) ? -1.0 : v);
        sum += v;
      }
      worst_sum = std::max(worst_sum, std::isfinite(sum) ? std::abs(sum - 1.0) : 1.0);
    }
  }
  const std::vector<double> m = {std::numbers::ln2, 0.0, 0.0, 0.0};
  const auto a = dual_normalize(m, 2, 2);
  const double want[] = {4.0 / 7.0, 3.0 / 7.0, 2.0 / 5.0, 3.0 / 5.0};
  double ex = 0.0;
  for (int i = 0; i < 4; ++i) ex = std::max(ex, std::abs(a[i] - want[i]));
  o.detail = std::to_string(kDualNormTrials) + " matrices, row-sum err " + fmt("%.1e", worst_sum) +
             ", worked example err " + fmt("%.1e", ex);
  o.require(worst_sum <= kRowSumTol, "row sums");
  o.require(most_negative >= 0.0, "negative entries");
  o.require(ex <= kWorkedExampleTol, "worked example");
  return o;
}

Outcome gradient_correctness() {
  Outcome o;
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (std::uint64_t seed : {1, 2, 3}) {
    worst = std::max(worst, harness::check_layer_gradients(seed, kGradEpsilon).worst());
    worst = std::max(worst, harness::check_model_gradients(seed, kGradEpsilon).worst());
  }
  const double t = seconds_since(t0);
  o.detail = "worst rel. error " + fmt("%.2e", worst) + ", " + fmt("%.1fs", t);
  o.require(worst < kGradTol, "tolerance exceeded");
  o.require(t < kGradSeconds, "too slow");
  return o;
}

Outcome linear_complexity() {
  Outcome o;
  const std::size_t tokens[] = {4096, 8192};
  const auto rows = complexity_probe(tokens, 64, 64, 1, kComplexityRepeats);
  const double ratio = rows[1].median_seconds / rows[0].median_seconds;
  o.detail = "N=4096 " + fmt("%.2fms", rows[0].median_seconds * 1e3) + ", N=8192 " +
             fmt("%.2fms", rows[1].median_seconds * 1e3) + ", ratio " + fmt("%.3f", ratio);
  o.require(ratio < kComplexityRatio, "ratio too large");
  return o;
}

Outcome directional_result() {
  Outcome o;
  const auto t0 = Clock::now();
  harness::ExperimentConfig base;
  base.epochs = 20;
  base.learning_rate = 0.1;
  base.unit_size = 64;
  std::map<std::string, harness::ExperimentConfig> by_name;
  for (const auto& c : harness::ablation_grid(base)) by_name[c.name] = c;
  std::map<std::string, double> mean;
  for (const char* name : {"baseline", "hp+ps+as", "hp+ps+as+ti"}) {
    double total = 0.0;
    for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
      auto cfg = by_name.at(name);
      cfg.seed = seed;
      const auto m = harness::train(cfg);
      o.require(!m.failed(), std::string(name) + " diverged");
      total += m.mean_held_out();
    }
    mean[name] = total / kSeeds;
  }
  const double t = seconds_since(t0);
  const double base_acc = mean["baseline"], aug = mean["hp+ps+as"], full = mean["hp+ps+as+ti"];
  o.detail = "baseline " + fmt("%.4f", base_acc) + ", augmentation " + fmt("%.4f", aug) + ", full " +
             fmt("%.4f", full) + ", gain " + fmt("%+.1fpp", 100.0 * (full - base_acc)) + ", " +
             fmt("%.0fs", t);
  o.require(full - base_acc >= kMinGain, "gain over baseline below 5pp");
  o.require(full >= aug, "full below augmentation-only");
  o.require(t < kExperimentSeconds, "too slow");
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

// Relative path -> bytes for every file under root.
std::map<std::string, std::string> snapshot(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) files[fs::relative(e.path(), root).generic_string()] = slurp(e.path());
  }
  return files;
}

Outcome determinism() {
  Outcome o;
  testing::TempDir tmp;
  const fs::path in = tmp / "in";
  Rng rng(1010);
  for (const char* rel : {"photo/dog/a.png", "photo/dog/b.png", "sketch/cat/c.ppm", "sketch/cat/d.pgm"}) {
    fs::create_directories((in / rel).parent_path());
    const std::size_t ch = std::string(rel).ends_with(".pgm") ? 1 : 3;
    write_image(quantized(Image(24, 20, ch, uniform(rng, 24 * 20 * ch))), in / rel);
  }
  {
    std::ofstream cfg(tmp / "exp.cfg");
    cfg << "augmentation = two_step\ntail_interaction = true\nepochs = 2\nsamples_per_class = 6\n";
  }
  const std::string cfg = (tmp / "exp.cfg").string();

  auto run_all = [&](const fs::path& out, const std::string& workers) {
    fs::create_directories(out);
    std::ostringstream sink;
    const std::vector<std::vector<std::string>> commands = {
        {"augment", in.string(), (out / "two_step").string(), "--random", "--seed", "42", "--workers", workers},
        {"augment", in.string(), (out / "gauss").string(), "--mode", "gaussian", "--random", "--seed", "42",
         "--workers", workers},
        {"spectrum", (in / "photo/dog/a.png").string(), "--out", (out / "spec").string()},
        {"train", "--config", cfg, "--seed", "42", "--out", (out / "train.csv").string()},
        {"sweep", "--param", "severity", "--values", "0.01,0.05", "--config", cfg, "--seed", "42", "--out",
         (out / "sweep.csv").string()},
    };
    bool ok = true;
    for (const auto& c : commands) ok = ok && cli::run(c, sink, sink) == cli::kExitOk;
    return ok;
  };
  const bool ran = run_all(tmp / "run1", "1") && run_all(tmp / "run2", "3");
  const auto a = snapshot(tmp / "run1"), b = snapshot(tmp / "run2");
  o.detail = std::to_string(a.size()) + " output files compared across two runs";
  o.require(ran, "a CLI run failed");
  o.require(!a.empty() && a == b, "outputs differ");
  return o;
}

}  // namespace

int main() {
#ifdef __GLIBC__
  mallopt(M_MMAP_THRESHOLD, 1 << 30);
  mallopt(M_TRIM_THRESHOLD, 1 << 30);
#endif
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"DFT correctness", dft_correctness},
      {"Pipeline identity", pipeline_identity},
      {"Energy scaling", energy_scaling},
      {"Mask semantics", mask_semantics},
      {"Gaussian path", gaussian_path},
      {"Dual normalization", dual_normalization},
      {"Gradient correctness", gradient_correctness},
      {"Linear complexity", linear_complexity},
      {"Directional result", directional_result},
      {"Determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failures += o.pass ? 0 : 1;
    std::printf("%s  %2zu. %-22s %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}

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

#include "freqgen/cli/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numbers>
#include <thread>

#include "CLI11.hpp"
#include "freqgen/error.hpp"
#include "freqgen/harness/config.hpp"
#include "freqgen/harness/gradcheck.hpp"
#include "freqgen/harness/report.hpp"
#include "freqgen/harness/train.hpp"
#include "freqgen/raster.hpp"
#include "freqgen/rng.hpp"
#include "freqgen/spatial_filter.hpp"
#include "freqgen/spectral_filter.hpp"

namespace fs = std::filesystem;

namespace freqgen::cli {
namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

bool is_image_path(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
  return ext == ".png" || ext == ".ppm" || ext == ".pgm";
}

bool is_within(const fs::path& inner, const fs::path& outer) {
  auto i = inner.begin();
  for (auto o = outer.begin(); o != outer.end(); ++o, ++i) {
    if (o->empty()) continue;
    if (i == inner.end() || *i != *o) return false;
  }
  return true;
}

std::optional<std::uint64_t> parse_seed_text(const std::string& text) {
  if (text.empty() || !std::isdigit(static_cast<unsigned char>(text[0]))) return std::nullopt;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
  if (*end != '\0') return std::nullopt;
  return v;
}

std::optional<std::uint64_t> env_seed() {
  const char* raw = std::getenv("FREQGEN_SEED");
  if (raw == nullptr) return std::nullopt;
  auto v = parse_seed_text(raw);
  if (!v) throw InvalidParameter(std::string("FREQGEN_SEED is not an unsigned integer: '") + raw + "'");
  return v;
}

// Serializes log lines coming from worker threads.
class Logger {
 public:
  explicit Logger(std::ostream& out) : out_(out) {}
  void line(const std::string& text) {
    std::lock_guard<std::mutex> lock(mu_);
    out_ << text << '\n';
  }

 private:
  std::ostream& out_;
  std::mutex mu_;
};

struct Job {
  fs::path source;
  fs::path target;
  std::string rel;
};

std::string process_one(const Job& job, const AugmentOptions& opt) {
  const Image img = read_image(job.source);
  std::string line = job.rel;
  Image result;
  if (opt.mode == AugmentMode::kTwoStep) {
    AugmentParams p{opt.d, opt.alpha, opt.beta};
    if (opt.random) {
      Rng rng(derive_seed(*opt.seed, job.rel));
      p = sample_params(rng, std::min(img.height(), img.width()));
    }
    result = two_step_highpass(img, p);
    line += "," + format_double(p.d) + "," + format_double(p.alpha) + "," + format_double(p.beta);
  } else {
    std::size_t k = opt.kernel;
    if (opt.random) {
      Rng rng(derive_seed(*opt.seed, job.rel));
      k = kKernelSizeSweep[rng.below(kKernelSizeSweep.size())];
    }
    result = high_freq_for_network(img, k);
    if (img.channels() == 1) result = Image(result.height(), result.width(), 1, result.plane(0));
    line += "," + std::to_string(k);
  }
  fs::create_directories(job.target.parent_path());
  write_image(result, job.target);
  return line;
}

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
  f << text;
  f.flush();
  if (!f) throw IoError("failed writing '" + path.string() + "'");
}

std::string rows_csv(const std::vector<harness::MetricRow>& rows) {
  std::ostringstream s;
  harness::write_metrics_csv(rows, s);
  return s.str();
}

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << text;
  } else {
    write_text_file(out_path, text);
  }
}

// Config file plus the seed list after applying --seed and FREQGEN_SEED.
struct LoadedConfig {
  harness::ExperimentConfig base;
  std::vector<std::uint64_t> seeds;
};

LoadedConfig load_with_seeds(const std::string& path, std::optional<std::uint64_t> flag_seed) {
  const auto file = harness::load_config(path);
  LoadedConfig lc{file.experiment, {}};
  if (flag_seed) {
    lc.seeds = {*flag_seed};
  } else if (file.has_seed) {
    lc.seeds = harness::seeds_of(file);
  } else if (auto s = env_seed()) {
    lc.seeds = {*s};
  } else {
    throw InvalidParameter("no seed: set seed/seeds in the config, pass --seed or set FREQGEN_SEED");
  }
  return lc;
}

std::optional<std::uint64_t> resolve_seed(const std::optional<std::uint64_t>& flag) {
  return flag ? flag : env_seed();
}

}  // namespace

AugmentSummary augment_tree(const AugmentOptions& opt, std::ostream& log) {
  if (!fs::is_directory(opt.in_dir)) {
    throw InvalidParameter("input directory '" + opt.in_dir.string() + "' does not exist");
  }
  const fs::path in_abs = fs::weakly_canonical(opt.in_dir);
  const fs::path out_abs = fs::weakly_canonical(opt.out_dir);
  if (is_within(out_abs, in_abs)) {
    throw InvalidParameter("output directory must lie outside the input directory");
  }
  if (is_within(in_abs, out_abs)) {
    throw InvalidParameter("input directory must not lie inside the output directory");
  }
  if (opt.random && !opt.seed) throw InvalidParameter("--random needs --seed or FREQGEN_SEED");
  if (opt.workers == 0) throw InvalidParameter("--workers must be positive");
  if (opt.mode == AugmentMode::kTwoStep && !opt.random) {
    validate(AugmentParams{opt.d, opt.alpha, opt.beta});
  }
  if (opt.mode == AugmentMode::kGaussian) gaussian_kernel(opt.kernel, sigma_for_kernel_size(opt.kernel));

  std::vector<Job> jobs;
  for (const auto& entry : fs::recursive_directory_iterator(in_abs)) {
    if (!entry.is_regular_file() || !is_image_path(entry.path())) continue;
    const fs::path rel = fs::relative(entry.path(), in_abs);
    jobs.push_back({entry.path(), out_abs / rel, rel.generic_string()});
  }
  std::sort(jobs.begin(), jobs.end(), [](const Job& a, const Job& b) { return a.rel < b.rel; });

  const fs::path manifest = out_abs / kManifestName;
  if (!opt.force) {
    if (fs::exists(manifest)) throw IoError("'" + manifest.string() + "' exists (use --force)");
    for (const auto& job : jobs) {
      if (fs::exists(job.target)) throw IoError("'" + job.target.string() + "' exists (use --force)");
    }
  }
  fs::create_directories(out_abs);

  Logger logger(log);
  std::vector<std::optional<std::string>> lines(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      try {
        lines[i] = process_one(jobs[i], opt);
      } catch (const Error& e) {
        logger.line("skipped " + jobs[i].rel + ": " + e.what());
      } catch (const fs::filesystem_error& e) {
        logger.line("skipped " + jobs[i].rel + ": " + e.what());
      }
    }
  };
  const std::size_t n_threads = std::min(opt.workers, std::max<std::size_t>(jobs.size(), 1));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  AugmentSummary summary;
  std::string text = opt.mode == AugmentMode::kTwoStep ? "path,d,alpha,beta\n" : "path,kernel_size\n";
  for (const auto& l : lines) {
    if (l) {
      text += *l + "\n";
      ++summary.written;
    } else {
      ++summary.skipped;
    }
  }
  write_text_file(manifest, text);
  return summary;
}

void write_spectrum_images(const fs::path& image, const std::string& prefix) {
  const Image img = read_image(image);
  const GrayImage gray = img.channels() == 3 ? rgb2gray(img) : GrayImage(img.height(), img.width(), img.plane(0));
  const AmpPhase ap = amp_phase(center(dft2(gray)));

  std::vector<double> amp(ap.amplitude.size());
  double peak = 0.0;
  for (std::size_t i = 0; i < amp.size(); ++i) {
    amp[i] = std::log1p(ap.amplitude[i]);
    peak = std::max(peak, amp[i]);
  }
  if (peak > 0.0) {
    for (double& v : amp) v /= peak;
  }
  std::vector<double> phase(ap.phase.size());
  for (std::size_t i = 0; i < phase.size(); ++i) {
    phase[i] = (ap.phase[i] + std::numbers::pi) / (2.0 * std::numbers::pi);
  }
  write_image(Image(img.height(), img.width(), 1, std::move(amp)), prefix + "_amplitude.png");
  write_image(Image(img.height(), img.width(), 1, std::move(phase)), prefix + "_phase.png");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Frequency-restricted augmentation and Tail Interaction toolkit", "freqgen"};
  app.require_subcommand(1);

  // augment
  AugmentOptions aug;
  std::string mode = "two-step";
  std::optional<std::uint64_t> aug_seed;
  auto* augment = app.add_subcommand("augment", "Filter every image under a directory tree");
  augment->add_option("in_dir", aug.in_dir, "Input tree")->required();
  augment->add_option("out_dir", aug.out_dir, "Output tree")->required();
  augment->add_option("--mode", mode, "two-step or gaussian")
      ->check(CLI::IsMember({"two-step", "two_step", "gaussian"}));
  augment->add_option("--d", aug.d, "High-pass diameter in pixels (0 passes everything)");
  augment->add_option("--alpha", aug.alpha, "Amplitude factor in (0, 1]");
  augment->add_option("--beta", aug.beta, "Phase factor in (0, 1]");
  augment->add_option("--kernel", aug.kernel, "Gaussian kernel size (odd)");
  augment->add_flag("--random", aug.random, "Draw per-image parameters from (seed, path)");
  augment->add_option("--seed", aug_seed, "Seed (falls back to FREQGEN_SEED)");
  augment->add_option("--workers", aug.workers, "Worker threads");
  augment->add_flag("--force", aug.force, "Overwrite existing outputs");

  // spectrum
  std::string spec_image, spec_prefix;
  auto* spectrum = app.add_subcommand("spectrum", "Dump centered log-amplitude and phase images");
  spectrum->add_option("image", spec_image, "Input image")->required();
  spectrum->add_option("--out", spec_prefix, "Output prefix")->required();

  // gradcheck
  std::optional<std::uint64_t> gc_seed;
  auto* gradcheck = app.add_subcommand("gradcheck", "Finite-difference gradient check");
  gradcheck->add_option("--seed", gc_seed, "Seed (falls back to FREQGEN_SEED)");

  // train
  std::string train_config, train_out;
  std::optional<std::uint64_t> train_seed;
  auto* train = app.add_subcommand("train", "Leave-one-domain-out training run");
  train->add_option("--config", train_config, "Experiment file")->required();
  train->add_option("--out", train_out, "Metrics CSV (default stdout)");
  train->add_option("--seed", train_seed, "Override the config seeds");

  // sweep
  std::string sweep_param, sweep_config, sweep_out;
  std::vector<std::string> sweep_values;
  std::optional<std::uint64_t> sweep_seed;
  auto* sweep = app.add_subcommand("sweep", "Train once per value of one hyper-parameter");
  sweep->add_option("--param", sweep_param, "unit-size, kernel-size, severity or scale (any config key)")
      ->required();
  sweep->add_option("--values", sweep_values, "Comma-separated values")->required()->delimiter(',');
  sweep->add_option("--config", sweep_config, "Experiment file")->required();
  sweep->add_option("--out", sweep_out, "Metrics CSV (default stdout)");
  sweep->add_option("--seed", sweep_seed, "Override the config seeds");

  // ablation
  std::string abl_config, abl_out, abl_metrics;
  std::optional<std::uint64_t> abl_seed;
  auto* ablation = app.add_subcommand("ablation", "Seven-configuration component ablation");
  ablation->add_option("--config", abl_config, "Base experiment file")->required();
  ablation->add_option("--out", abl_out, "Summary CSV (config,seeds,mean,std)");
  ablation->add_option("--metrics", abl_metrics, "Per-fold metrics CSV");
  ablation->add_option("--seed", abl_seed, "Override the config seeds");

  std::vector<std::string> argv_store;
  argv_store.push_back("freqgen");
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (augment->parsed()) {
      aug.mode = mode == "gaussian" ? AugmentMode::kGaussian : AugmentMode::kTwoStep;
      aug.seed = resolve_seed(aug_seed);
      const auto summary = augment_tree(aug, err);
      out << "wrote " << summary.written << " images";
      if (summary.skipped > 0) out << ", skipped " << summary.skipped;
      out << '\n';
      return summary.skipped > 0 ? kExitIo : kExitOk;
    }
    if (spectrum->parsed()) {
      write_spectrum_images(spec_image, spec_prefix);
      return kExitOk;
    }
    if (gradcheck->parsed()) {
      const auto seed = resolve_seed(gc_seed);
      if (!seed) throw InvalidParameter("gradcheck needs --seed or FREQGEN_SEED");
      bool ok = true;
      for (const auto& [label, report] :
           {std::pair{"layer", harness::check_layer_gradients(*seed)},
            std::pair{"model", harness::check_model_gradients(*seed)}}) {
        for (const auto& e : report.entries) {
          char buf[160];
          std::snprintf(buf, sizeof(buf), "%-6s %-18s max_rel=%.3e max_abs=%.3e %s", label,
                        e.name.c_str(), e.max_rel_error, e.max_abs_error,
                        e.max_rel_error < harness::kGradCheckTolerance ? "ok" : "FAIL");
          out << buf << '\n';
        }
        ok = ok && report.passed();
      }
      out << (ok ? "gradcheck passed" : "gradcheck FAILED") << '\n';
      return ok ? kExitOk : kExitCheck;
    }
    if (train->parsed()) {
      const auto lc = load_with_seeds(train_config, train_seed);
      std::vector<harness::MetricRow> rows;
      for (auto seed : lc.seeds) {
        auto cfg = lc.base;
        cfg.seed = seed;
        const auto m = harness::train(cfg);
        auto fold_rows = harness::metric_rows(m);
        rows.insert(rows.end(), fold_rows.begin(), fold_rows.end());
        rows.push_back(harness::mean_row(m, cfg.name));
      }
      emit(rows_csv(rows), train_out, out);
      return kExitOk;
    }
    if (sweep->parsed()) {
      const auto lc = load_with_seeds(sweep_config, sweep_seed);
      std::vector<harness::MetricRow> rows;
      for (const auto& value : sweep_values) {
        auto cfg = lc.base;
        harness::apply_setting(cfg, sweep_param, value);
        for (auto seed : lc.seeds) {
          cfg.seed = seed;
          rows.push_back(harness::mean_row(harness::train(cfg), sweep_param + "=" + value));
        }
      }
      emit(rows_csv(rows), sweep_out, out);
      return kExitOk;
    }
    if (ablation->parsed()) {
      const auto lc = load_with_seeds(abl_config, abl_seed);
      std::vector<harness::MetricRow> rows;
      for (const auto& cfg0 : harness::ablation_grid(lc.base)) {
        for (auto seed : lc.seeds) {
          auto cfg = cfg0;
          cfg.seed = seed;
          auto fold_rows = harness::metric_rows(harness::train(cfg));
          rows.insert(rows.end(), fold_rows.begin(), fold_rows.end());
        }
      }
      const auto summary = harness::ablation_report(rows);
      out << harness::format_ablation_table(summary);
      if (!abl_metrics.empty()) write_text_file(abl_metrics, rows_csv(rows));
      if (!abl_out.empty()) {
        std::ostringstream s;
        harness::write_ablation_csv(summary, s);
        write_text_file(abl_out, s.str());
      }
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidParameter& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitUsage;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace freqgen::cli

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
#include <iosfwd>
#include <string>
#include <vector>

#include "freqgen/harness/train.hpp"

namespace freqgen::harness {

/// One line of the metrics CSV: config,seed,held_out_domain,accuracy.
struct MetricRow {
  std::string config;
  std::uint64_t seed = 0;
  std::string held_out_domain;
  double accuracy = 0.0;
};

inline constexpr const char* kMetricsCsvHeader = "config,seed,held_out_domain,accuracy";

/// One row per fold, domain named.
std::vector<MetricRow> metric_rows(const Metrics& metrics);

/// One row averaging all folds, held_out_domain = "mean".
MetricRow mean_row(const Metrics& metrics, const std::string& config_label);

void write_metrics_csv(const std::vector<MetricRow>& rows, std::ostream& out);

struct AblationRow {
  std::string config;
  std::size_t seeds = 0;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation over seeds
};

/// Groups rows by config (first-appearance order). Per seed the fold
/// accuracies are averaged; mean and std are taken over seeds.
std::vector<AblationRow> ablation_report(const std::vector<MetricRow>& rows);

void write_ablation_csv(const std::vector<AblationRow>& rows, std::ostream& out);
std::string format_ablation_table(const std::vector<AblationRow>& rows);

}  // namespace freqgen::harness

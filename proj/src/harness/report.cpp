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

#include "freqgen/harness/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>

namespace freqgen::harness {
namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

}  // namespace

std::vector<MetricRow> metric_rows(const Metrics& metrics) {
  std::vector<MetricRow> rows;
  for (const auto& f : metrics.folds) {
    rows.push_back({metrics.config, metrics.seed, std::string(kDomainNames[f.held_out_domain]),
                    f.held_out_accuracy});
  }
  return rows;
}

MetricRow mean_row(const Metrics& metrics, const std::string& config_label) {
  return {config_label, metrics.seed, "mean", metrics.mean_held_out()};
}

void write_metrics_csv(const std::vector<MetricRow>& rows, std::ostream& out) {
  out << kMetricsCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.config << ',' << r.seed << ',' << r.held_out_domain << ',' << fixed(r.accuracy, 6)
        << '\n';
  }
}

std::vector<AblationRow> ablation_report(const std::vector<MetricRow>& rows) {
  std::vector<std::string> order;
  std::map<std::string, std::map<std::uint64_t, std::vector<double>>> grouped;
  for (const auto& r : rows) {
    if (grouped.find(r.config) == grouped.end()) order.push_back(r.config);
    grouped[r.config][r.seed].push_back(r.accuracy);
  }
  std::vector<AblationRow> out;
  for (const auto& name : order) {
    std::vector<double> per_seed;
    for (const auto& [seed, accs] : grouped[name]) {
      double s = 0.0;
      for (double a : accs) s += a;
      per_seed.push_back(s / static_cast<double>(accs.size()));
    }
    AblationRow row{name, per_seed.size(), 0.0, 0.0};
    for (double v : per_seed) row.mean += v;
    row.mean /= static_cast<double>(per_seed.size());
    if (per_seed.size() > 1) {
      double ss = 0.0;
      for (double v : per_seed) ss += (v - row.mean) * (v - row.mean);
      row.stddev = std::sqrt(ss / static_cast<double>(per_seed.size() - 1));
    }
    out.push_back(row);
  }
  return out;
}

void write_ablation_csv(const std::vector<AblationRow>& rows, std::ostream& out) {
  out << "config,seeds,mean,std\n";
  for (const auto& r : rows) {
    out << r.config << ',' << r.seeds << ',' << fixed(r.mean, 6) << ',' << fixed(r.stddev, 6)
        << '\n';
  }
}

std::string format_ablation_table(const std::vector<AblationRow>& rows) {
  std::size_t width = 6;
  for (const auto& r : rows) width = std::max(width, r.config.size());
  std::string out;
  auto pad = [&](const std::string& s) { return s + std::string(width - s.size() + 2, ' '); };
  out += pad("config") + "seeds  accuracy (%)\n";
  for (const auto& r : rows) {
    out += pad(r.config) + fixed(static_cast<double>(r.seeds), 0) + "      " +
           fixed(100.0 * r.mean, 2) + " +- " + fixed(100.0 * r.stddev, 2) + "\n";
  }
  return out;
}

}  // namespace freqgen::harness

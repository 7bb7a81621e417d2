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

#include "freqgen/harness/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "freqgen/error.hpp"

namespace freqgen::harness {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Value parse failures surface as std::invalid_argument and get wrapped
// with line/key context by the caller.
std::uint64_t to_uint(const std::string& v) {
  if (v.empty() || v[0] == '-' || v[0] == '+') throw std::invalid_argument("expected a non-negative integer");
  errno = 0;
  char* end = nullptr;
  const unsigned long long x = std::strtoull(v.c_str(), &end, 10);
  if (errno != 0 || end == v.c_str() || *end != '\0') {
    throw std::invalid_argument("expected a non-negative integer");
  }
  return x;
}

std::size_t to_positive(const std::string& v) {
  const auto x = to_uint(v);
  if (x == 0) throw std::invalid_argument("expected a positive integer");
  return static_cast<std::size_t>(x);
}

double to_double(const std::string& v) {
  errno = 0;
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (errno != 0 || end == v.c_str() || *end != '\0') throw std::invalid_argument("expected a number");
  return x;
}

bool to_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw std::invalid_argument("expected true or false");
}

std::size_t to_domain(const std::string& v) {
  for (std::size_t i = 0; i < kDomainNames.size(); ++i) {
    if (v == kDomainNames[i]) return i;
  }
  const auto x = to_uint(v);
  if (x >= kDomainCount) throw std::invalid_argument("domain index out of range");
  return static_cast<std::size_t>(x);
}

void apply(ExperimentConfig& c, const std::string& key, const std::string& value) {
  if (key == "name") {
    if (value.empty() || value.find(',') != std::string::npos) {
      throw std::invalid_argument("name must be non-empty and contain no commas");
    }
    c.name = value;
  } else if (key == "augmentation") {
    try {
      c.augmentation = parse_augmentation(value);
    } catch (const InvalidParameter&) {
      throw std::invalid_argument("expected none, gaussian or two_step");
    }
  } else if (key == "tail_interaction") {
    c.use_tail_interaction = to_bool(value);
  } else if (key == "phase_scaling") {
    c.use_phase_scaling = to_bool(value);
  } else if (key == "amplitude_scaling") {
    c.use_amplitude_scaling = to_bool(value);
  } else if (key == "nesterov") {
    c.nesterov = to_bool(value);
  } else if (key == "seed") {
    c.seed = to_uint(value);
  } else if (key == "epochs") {
    c.epochs = to_positive(value);
  } else if (key == "batch_size") {
    c.batch_size = to_positive(value);
  } else if (key == "learning_rate") {
    c.learning_rate = to_double(value);
    if (!(c.learning_rate > 0.0)) throw std::invalid_argument("must be positive");
  } else if (key == "momentum") {
    c.momentum = to_double(value);
    if (!(c.momentum >= 0.0 && c.momentum < 1.0)) throw std::invalid_argument("must lie in [0, 1)");
  } else if (key == "weight_decay") {
    c.weight_decay = to_double(value);
    if (!(c.weight_decay >= 0.0)) throw std::invalid_argument("must be >= 0");
  } else if (key == "features") {
    c.features = to_positive(value);
  } else if (key == "unit_size") {
    c.unit_size = to_positive(value);
  } else if (key == "ti_blocks") {
    c.ti_blocks = to_positive(value);
  } else if (key == "kernel_size") {
    c.kernel_size = to_positive(value);
    if (c.kernel_size % 2 == 0) throw std::invalid_argument("kernel size must be odd");
  } else if (key == "severity") {
    if (value == "random") {
      c.severity.reset();
    } else {
      const double s = to_double(value);
      if (!(s >= 0.0)) throw std::invalid_argument("severity must be >= 0");
      c.severity = s;
    }
  } else if (key == "scale") {
    if (value == "random") {
      c.scale.reset();
    } else {
      const double s = to_double(value);
      if (!(s > 0.0 && s <= 1.0)) throw std::invalid_argument("scale must lie in (0, 1]");
      c.scale = s;
    }
  } else if (key == "samples_per_class") {
    c.samples_per_class = to_positive(value);
  } else if (key == "validation_fraction") {
    c.validation_fraction = to_double(value);
    if (!(c.validation_fraction >= 0.0 && c.validation_fraction < 1.0)) {
      throw std::invalid_argument("must lie in [0, 1)");
    }
  } else if (key == "spurious_rate") {
    c.spurious_rate = to_double(value);
    if (!(c.spurious_rate >= 0.0 && c.spurious_rate <= 1.0)) {
      throw std::invalid_argument("must lie in [0, 1]");
    }
  } else if (key == "held_out_domains") {
    std::vector<std::size_t> domains;
    for (const auto& item : split_list(value)) domains.push_back(to_domain(item));
    if (domains.empty()) throw std::invalid_argument("expected at least one domain");
    c.held_out_domains = domains;
  } else {
    throw ConfigError("unknown key '" + key + "'");
  }
}

std::string normalize_key(std::string key) {
  std::replace(key.begin(), key.end(), '-', '_');
  return key;
}

}  // namespace

void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value) {
  const std::string k = normalize_key(key);
  try {
    apply(config, k, value);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("key '" + k + "': " + e.what() + ", got '" + value + "'");
  }
}

ConfigFile parse_config(std::istream& in, const std::string& source) {
  ConfigFile file;
  std::set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno) + ": ";
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
    const std::string key = normalize_key(trim(line.substr(0, eq)));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + "missing key");
    if (!seen.insert(key).second) throw ConfigError(where + "duplicate key '" + key + "'");
    if (key == "seed" || key == "seeds") file.has_seed = true;
    try {
      if (key == "seeds") {
        file.seeds.clear();
        for (const auto& item : split_list(value)) file.seeds.push_back(to_uint(item));
        if (file.seeds.empty()) throw std::invalid_argument("expected a list of seeds");
      } else {
        apply(file.experiment, key, value);
      }
    } catch (const std::invalid_argument& e) {
      throw ConfigError(where + "key '" + key + "': " + e.what() + ", got '" + value + "'");
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  return file;
}

ConfigFile load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  return parse_config(in, path.string());
}

std::vector<std::uint64_t> seeds_of(const ConfigFile& file) {
  if (!file.seeds.empty()) return file.seeds;
  return {file.experiment.seed};
}

}  // namespace freqgen::harness

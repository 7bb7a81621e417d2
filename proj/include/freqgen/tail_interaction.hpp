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
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "freqgen/rng.hpp"

namespace freqgen {

/// B x N x z activations, row-major (batch, token, channel).
struct FeatureMap {
  std::size_t batch = 0;
  std::size_t tokens = 0;
  std::size_t channels = 0;
  std::vector<double> data;

  FeatureMap() = default;
  FeatureMap(std::size_t b, std::size_t n, std::size_t z);
  FeatureMap(std::size_t b, std::size_t n, std::size_t z, std::vector<double> values);

  double& at(std::size_t b, std::size_t i, std::size_t c) {
    return data[(b * tokens + i) * channels + c];
  }
  double at(std::size_t b, std::size_t i, std::size_t c) const {
    return data[(b * tokens + i) * channels + c];
  }
  /// The N x z slab of one batch item.
  std::span<double> item(std::size_t b) { return {data.data() + b * tokens * channels, tokens * channels}; }
  std::span<const double> item(std::size_t b) const {
    return {data.data() + b * tokens * channels, tokens * channels};
  }
};

inline constexpr std::size_t kDefaultUnitSize = 64;

/// Learnable state of one Tail Interaction block. query is z x z
/// (no bias), key and value are the S x z interaction units.
struct InteractionParams {
  std::size_t channels = 0;
  std::size_t units = 0;
  std::vector<double> query;
  std::vector<double> key;
  std::vector<double> value;

  /// query = identity, key/value ~ N(0, 1/z) (stddev 1/sqrt(z)).
  static InteractionParams initialize(std::size_t channels, std::size_t units, Rng& rng);

  std::size_t parameter_count() const { return query.size() + key.size() + value.size(); }
};

/// Two-step normalization of an N x S score matrix: softmax down each
/// column (over tokens), then l1-normalization of each row. Output rows
/// are nonnegative and sum to 1.
std::vector<double> dual_normalize(std::span<const double> scores, std::size_t tokens,
                                   std::size_t units);

class TailInteraction {
 public:
  /// Intermediates saved by forward for backward. Tied to the layer
  /// instance and its parameter generation.
  struct Cache {
    const TailInteraction* owner = nullptr;
    std::uint64_t generation = 0;
    FeatureMap input;
    std::vector<double> projected;  // B x N x z, input * query^T
    std::vector<double> softmax;    // B x N x S, column softmax
    std::vector<double> attention;  // B x N x S, after row l1
    std::vector<double> preact;     // B x N x z, attention * value + input
  };

  struct Gradients {
    FeatureMap input;
    std::vector<double> query;
    std::vector<double> key;
    std::vector<double> value;
  };

  explicit TailInteraction(InteractionParams params);

  const InteractionParams& params() const { return params_; }
  /// Mutable access invalidates caches produced before the call.
  InteractionParams& mutable_params() {
    ++generation_;
    return params_;
  }

  /// ReLU(dual_normalize(F Q^T K^T) V + F) per batch item. Throws
  /// InvalidInput when F's channel count differs from the layer's.
  FeatureMap forward(const FeatureMap& input, Cache* cache = nullptr) const;

  /// Exact gradients of forward. Throws InvalidState for a cache from
  /// another layer or an older parameter generation, InvalidInput for a
  /// grad_out shape mismatch.
  Gradients backward(const FeatureMap& grad_out, const Cache& cache) const;

 private:
  InteractionParams params_;
  std::uint64_t generation_ = 1;
};

// Binary parameter file, all fields little-endian:
//   bytes 0-3   magic "FGTI"
//   bytes 4-7   uint32 version (1)
//   bytes 8-11  uint32 z (channels)
//   bytes 12-15 uint32 S (units)
//   then float64 query[z*z], key[S*z], value[S*z], row-major.
inline constexpr std::uint32_t kParamFileVersion = 1;
void write_params(const InteractionParams& params, std::ostream& out);
InteractionParams read_params(std::istream& in);

struct ProbeRow {
  std::size_t tokens = 0;
  double median_seconds = 0.0;
};

/// Median wall-clock time of forward() at each token count.
std::vector<ProbeRow> complexity_probe(std::span<const std::size_t> token_counts,
                                       std::size_t units = kDefaultUnitSize,
                                       std::size_t channels = 64, std::size_t batch = 1,
                                       std::size_t repeats = 20, std::uint64_t seed = 1);

}  // namespace freqgen

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

#include "freqgen/tail_interaction.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "freqgen/error.hpp"
#include "freqgen/linalg.hpp"

namespace freqgen {
namespace {

// Column softmax then row l1 on one N x S slab, writing both stages. A
// row whose softmax entries are all tiny is normalized from
// log-probabilities instead, so it cannot collapse to 0/0.
void dual_normalize_into(const double* scores, std::size_t n, std::size_t s, double* softmax,
                         double* attention) {
  constexpr double kTinyRowSum = 1e-250;
  std::vector<double> log_total(s);
  for (std::size_t j = 0; j < s; ++j) {
    double mx = scores[j];
    for (std::size_t i = 1; i < n; ++i) mx = std::max(mx, scores[i * s + j]);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = std::exp(scores[i * s + j] - mx);
      softmax[i * s + j] = e;
      total += e;
    }
    const double inv = 1.0 / total;
    for (std::size_t i = 0; i < n; ++i) softmax[i * s + j] *= inv;
    log_total[j] = mx + std::log(total);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = softmax + i * s;
    double* out = attention + i * s;
    double sum = 0.0;
    for (std::size_t j = 0; j < s; ++j) sum += row[j];
    if (sum >= kTinyRowSum) {
      for (std::size_t j = 0; j < s; ++j) out[j] = row[j] / sum;
      continue;
    }
    double mx = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < s; ++j) mx = std::max(mx, scores[i * s + j] - log_total[j]);
    double log_sum = 0.0;
    for (std::size_t j = 0; j < s; ++j) log_sum += (out[j] = std::exp(scores[i * s + j] - log_total[j] - mx));
    for (std::size_t j = 0; j < s; ++j) out[j] /= log_sum;
  }
}

void put_u32(std::ostream& out, std::uint32_t v) {
  char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFFU);
  out.write(b, 4);
}

void put_f64(std::ostream& out, double d) {
  const auto v = std::bit_cast<std::uint64_t>(d);
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFFU);
  out.write(b, 8);
}

std::uint64_t get_bytes(std::istream& in, int count) {
  unsigned char b[8] = {};
  in.read(reinterpret_cast<char*>(b), count);
  if (in.gcount() != count) throw DecodeError("parameter file truncated");
  std::uint64_t v = 0;
  for (int i = 0; i < count; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

}  // namespace

FeatureMap::FeatureMap(std::size_t b, std::size_t n, std::size_t z)
    : batch(b), tokens(n), channels(z), data(b * n * z, 0.0) {}

FeatureMap::FeatureMap(std::size_t b, std::size_t n, std::size_t z, std::vector<double> values)
    : batch(b), tokens(n), channels(z), data(std::move(values)) {
  if (data.size() != b * n * z) throw InvalidInput("FeatureMap: data length mismatch");
}

InteractionParams InteractionParams::initialize(std::size_t channels, std::size_t units,
                                                Rng& rng) {
  if (channels == 0 || units == 0) throw InvalidParameter("InteractionParams: empty shape");
  InteractionParams p;
  p.channels = channels;
  p.units = units;
  p.query.assign(channels * channels, 0.0);
  for (std::size_t i = 0; i < channels; ++i) p.query[i * channels + i] = 1.0;
  const double stddev = 1.0 / std::sqrt(static_cast<double>(channels));
  p.key.resize(units * channels);
  for (double& v : p.key) v = rng.normal(0.0, stddev);
  p.value.resize(units * channels);
  for (double& v : p.value) v = rng.normal(0.0, stddev);
  return p;
}

std::vector<double> dual_normalize(std::span<const double> scores, std::size_t tokens,
                                   std::size_t units) {
  if (scores.size() != tokens * units || tokens == 0 || units == 0) {
    throw InvalidInput("dual_normalize: expected a non-empty N x S matrix");
  }
  std::vector<double> softmax(scores.size()), out(scores.size());
  dual_normalize_into(scores.data(), tokens, units, softmax.data(), out.data());
  return out;
}

TailInteraction::TailInteraction(InteractionParams params) : params_(std::move(params)) {
  const std::size_t z = params_.channels, s = params_.units;
  if (z == 0 || s == 0 || params_.query.size() != z * z || params_.key.size() != s * z ||
      params_.value.size() != s * z) {
    throw InvalidInput("TailInteraction: parameter shapes inconsistent with z and S");
  }
}

FeatureMap TailInteraction::forward(const FeatureMap& input, Cache* cache) const {
  const std::size_t z = params_.channels, s = params_.units;
  if (input.channels != z) {
    throw InvalidInput("TailInteraction::forward: input has " + std::to_string(input.channels) +
                       " channels, layer expects " + std::to_string(z));
  }
  if (input.tokens == 0 || input.data.size() != input.batch * input.tokens * z) {
    throw InvalidInput("TailInteraction::forward: malformed feature map");
  }
  const std::size_t b_count = input.batch, n = input.tokens;

  std::vector<double> projected(b_count * n * z), scores(n * s), softmax(b_count * n * s),
      attention(b_count * n * s), preact(b_count * n * z);
  FeatureMap out(b_count, n, z);

  for (std::size_t b = 0; b < b_count; ++b) {
    const auto f = input.item(b);
    double* fq = projected.data() + b * n * z;
    double* sm = softmax.data() + b * n * s;
    double* att = attention.data() + b * n * s;
    double* pre = preact.data() + b * n * z;

    linalg::matmul_abt(f, params_.query, {fq, n * z}, n, z, z);
    linalg::matmul_abt({fq, n * z}, params_.key, scores, n, z, s);
    dual_normalize_into(scores.data(), n, s, sm, att);
    linalg::matmul_ab({att, n * s}, params_.value, {pre, n * z}, n, s, z);

    auto y = out.item(b);
    for (std::size_t i = 0; i < n * z; ++i) {
      pre[i] += f[i];
      y[i] = pre[i] > 0.0 ? pre[i] : 0.0;
    }
  }

  if (cache != nullptr) {
    cache->owner = this;
    cache->generation = generation_;
    cache->input = input;
    cache->projected = std::move(projected);
    cache->softmax = std::move(softmax);
    cache->attention = std::move(attention);
    cache->preact = std::move(preact);
  }
  return out;
}

TailInteraction::Gradients TailInteraction::backward(const FeatureMap& grad_out,
                                                     const Cache& cache) const {
  if (cache.owner != this || cache.generation != generation_) {
    throw InvalidState("TailInteraction::backward: cache is stale or from another layer");
  }
  const std::size_t z = params_.channels, s = params_.units;
  const std::size_t b_count = cache.input.batch, n = cache.input.tokens;
  if (grad_out.batch != b_count || grad_out.tokens != n || grad_out.channels != z ||
      grad_out.data.size() != b_count * n * z) {
    throw InvalidInput("TailInteraction::backward: grad_out shape does not match the cache");
  }

  Gradients g{FeatureMap(b_count, n, z), std::vector<double>(z * z, 0.0),
              std::vector<double>(s * z, 0.0), std::vector<double>(s * z, 0.0)};
  std::vector<double> gated(n * z), d_att(n * s), d_soft(n * s), d_scores(n * s),
      d_proj(n * z), d_in(n * z);

  for (std::size_t b = 0; b < b_count; ++b) {
    const auto go = grad_out.item(b);
    const double* pre = cache.preact.data() + b * n * z;
    const double* att = cache.attention.data() + b * n * s;
    const double* sm = cache.softmax.data() + b * n * s;
    const std::span<const double> fq{cache.projected.data() + b * n * z, n * z};
    const auto f = cache.input.item(b);

    for (std::size_t i = 0; i < n * z; ++i) gated[i] = pre[i] > 0.0 ? go[i] : 0.0;

    linalg::matmul_atb_acc({att, n * s}, gated, g.value, n, s, z);
    linalg::matmul_abt(gated, params_.value, d_att, n, z, s);

    // Row l1 then column softmax, written with a_ij = h_ij / r_i so that
    // r_i never appears: d_soft holds r_i * dL/dh_ij.
    for (std::size_t i = 0; i < n; ++i) {
      double dot = 0.0;
      for (std::size_t j = 0; j < s; ++j) dot += d_att[i * s + j] * att[i * s + j];
      for (std::size_t j = 0; j < s; ++j) d_soft[i * s + j] = d_att[i * s + j] - dot;
    }
    for (std::size_t j = 0; j < s; ++j) {
      double dot = 0.0;
      for (std::size_t i = 0; i < n; ++i) dot += att[i * s + j] * d_soft[i * s + j];
      for (std::size_t i = 0; i < n; ++i) {
        d_scores[i * s + j] = att[i * s + j] * d_soft[i * s + j] - sm[i * s + j] * dot;
      }
    }

    linalg::matmul_atb_acc(d_scores, fq, g.key, n, s, z);
    linalg::matmul_ab(d_scores, params_.key, d_proj, n, s, z);
    linalg::matmul_atb_acc(d_proj, f, g.query, n, z, z);
    linalg::matmul_ab(d_proj, params_.query, d_in, n, z, z);

    auto gi = g.input.item(b);
    for (std::size_t i = 0; i < n * z; ++i) gi[i] = gated[i] + d_in[i];
  }
  return g;
}

void write_params(const InteractionParams& params, std::ostream& out) {
  out.write("FGTI", 4);
  put_u32(out, kParamFileVersion);
  put_u32(out, static_cast<std::uint32_t>(params.channels));
  put_u32(out, static_cast<std::uint32_t>(params.units));
  for (double v : params.query) put_f64(out, v);
  for (double v : params.key) put_f64(out, v);
  for (double v : params.value) put_f64(out, v);
  if (!out) throw IoError("write_params: stream write failed");
}

InteractionParams read_params(std::istream& in) {
  char magic[4] = {};
  in.read(magic, 4);
  if (in.gcount() != 4 || std::string(magic, 4) != "FGTI") {
    throw DecodeError("parameter file: bad magic");
  }
  const auto version = static_cast<std::uint32_t>(get_bytes(in, 4));
  if (version != kParamFileVersion) {
    throw UnsupportedFormat("parameter file: version " + std::to_string(version));
  }
  InteractionParams p;
  p.channels = static_cast<std::size_t>(get_bytes(in, 4));
  p.units = static_cast<std::size_t>(get_bytes(in, 4));
  if (p.channels == 0 || p.units == 0 || p.channels > 65536 || p.units > 65536) {
    throw DecodeError("parameter file: implausible shape");
  }
  auto fill = [&](std::vector<double>& v, std::size_t count) {
    v.resize(count);
    for (double& d : v) d = std::bit_cast<double>(get_bytes(in, 8));
  };
  fill(p.query, p.channels * p.channels);
  fill(p.key, p.units * p.channels);
  fill(p.value, p.units * p.channels);
  return p;
}

std::vector<ProbeRow> complexity_probe(std::span<const std::size_t> token_counts,
                                       std::size_t units, std::size_t channels,
                                       std::size_t batch, std::size_t repeats,
                                       std::uint64_t seed) {
  Rng rng(seed);
  const TailInteraction layer(InteractionParams::initialize(channels, units, rng));
  std::vector<ProbeRow> rows;
  for (std::size_t n : token_counts) {
    FeatureMap f(batch, n, channels);
    for (double& v : f.data) v = rng.normal();
    layer.forward(f);  // warm-up
    std::vector<double> times;
    for (std::size_t r = 0; r < std::max<std::size_t>(repeats, 1); ++r) {
      const auto t0 = std::chrono::steady_clock::now();
      const FeatureMap y = layer.forward(f);
      const auto t1 = std::chrono::steady_clock::now();
      if (y.data.empty()) break;
      times.push_back(std::chrono::duration<double>(t1 - t0).count());
    }
    std::sort(times.begin(), times.end());
    const std::size_t m = times.size();
    const double median = m % 2 == 1 ? times[m / 2] : 0.5 * (times[m / 2 - 1] + times[m / 2]);
    rows.push_back({n, median});
  }
  return rows;
}

}  // namespace freqgen

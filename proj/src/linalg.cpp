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

#include "freqgen/linalg.hpp"

#include <algorithm>
#include <cassert>

#include "freqgen/simd/kernels.hpp"

namespace freqgen::linalg {

void matmul_abt(std::span<const double> a, std::span<const double> b, std::span<double> c,
                std::size_t n, std::size_t k, std::size_t m) {
  assert(a.size() >= n * k && b.size() >= m * k && c.size() >= n * m);
  const auto& kt = simd::active();
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = a.data() + i * k;
    double* out = c.data() + i * m;
    for (std::size_t j = 0; j < m; ++j) out[j] = kt.dot(row, b.data() + j * k, k);
  }
}

void matmul_ab(std::span<const double> a, std::span<const double> b, std::span<double> c,
               std::size_t n, std::size_t k, std::size_t m) {
  assert(a.size() >= n * k && b.size() >= k * m && c.size() >= n * m);
  const auto& kt = simd::active();
  for (std::size_t i = 0; i < n; ++i) {
    double* out = c.data() + i * m;
    std::fill(out, out + m, 0.0);
    const double* row = a.data() + i * k;
    for (std::size_t l = 0; l < k; ++l) {
      if (row[l] != 0.0) kt.axpy(row[l], b.data() + l * m, out, m);
    }
  }
}

void matmul_atb_acc(std::span<const double> a, std::span<const double> b, std::span<double> c,
                    std::size_t n, std::size_t k, std::size_t m) {
  assert(a.size() >= n * k && b.size() >= n * m && c.size() >= k * m);
  const auto& kt = simd::active();
  for (std::size_t i = 0; i < n; ++i) {
    const double* arow = a.data() + i * k;
    const double* brow = b.data() + i * m;
    for (std::size_t l = 0; l < k; ++l) {
      if (arow[l] != 0.0) kt.axpy(arow[l], brow, c.data() + l * m, m);
    }
  }
}

}  // namespace freqgen::linalg

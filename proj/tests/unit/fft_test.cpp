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

#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "freqgen/error.hpp"
#include "freqgen/fft.hpp"
#include "freqgen/rng.hpp"
#include "support/oracles.hpp"

using namespace freqgen;
using freqgen::testing::cplx;

namespace {

std::vector<cplx> random_grid(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<cplx> v(n);
  for (auto& x : v) x = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
  return v;
}

double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("2x2 transform of [[1,2],[3,4]]") {
  std::vector<cplx> x = {1, 2, 3, 4};
  fft::forward_2d(x, 2, 2);
  CHECK(x[0] == cplx(10, 0));
  CHECK(x[1] == cplx(-2, 0));
  CHECK(x[2] == cplx(-4, 0));
  CHECK(x[3] == cplx(0, 0));
}

TEST_CASE("1D transform matches the direct sum for every length up to 40") {
  for (std::size_t n = 1; n <= 40; ++n) {
    CAPTURE(n);
    const auto x = random_grid(n, n);
    auto fast = x;
    fft::forward(fast);
    const auto ref = freqgen::testing::naive_dft2(x, 1, n);
    CHECK(max_abs_diff(fast, ref) <= 1e-11);
    fft::inverse(fast);
    CHECK(max_abs_diff(fast, x) <= 1e-12);
  }
}

TEST_CASE("2D transform matches the direct double sum") {
  for (auto [h, w] : {std::pair{8, 8}, std::pair{16, 16}, std::pair{5, 12}, std::pair{7, 3},
                      std::pair{1, 9}}) {
    CAPTURE(h);
    CAPTURE(w);
    const auto x = random_grid(h * w, h * 100 + w);
    auto fast = x;
    fft::forward_2d(fast, h, w);
    CHECK(max_abs_diff(fast, freqgen::testing::naive_dft2(x, h, w)) <= 1e-9);
    auto back = fast;
    fft::inverse_2d(back, h, w);
    CHECK(max_abs_diff(back, x) <= 1e-12);
    CHECK(max_abs_diff(back, freqgen::testing::naive_dft2(fast, h, w, true)) <= 1e-9);
  }
}

TEST_CASE("inverse round-trips large and awkward sizes") {
  for (auto [h, w] : {std::pair{64, 64}, std::pair{224, 224}, std::pair{97, 50}}) {
    const auto x = random_grid(h * w, h + w);
    auto y = x;
    fft::forward_2d(y, h, w);
    fft::inverse_2d(y, h, w);
    CHECK(max_abs_diff(x, y) <= 1e-9);
  }
}

TEST_CASE("Parseval holds for the unnormalized transform") {
  const auto x = random_grid(24 * 18, 3);
  auto y = x;
  fft::forward_2d(y, 24, 18);
  double ex = 0.0, ey = 0.0;
  for (const auto& v : x) ex += std::norm(v);
  for (const auto& v : y) ey += std::norm(v);
  CHECK(ey / static_cast<double>(x.size()) == doctest::Approx(ex).epsilon(1e-12));
}

TEST_CASE("real input has a conjugate-symmetric spectrum") {
  Rng rng(4);
  const std::size_t h = 10, w = 15;
  std::vector<cplx> x(h * w);
  for (auto& v : x) v = rng.uniform();
  fft::forward_2d(x, h, w);
  for (std::size_t u = 0; u < h; ++u) {
    for (std::size_t v = 0; v < w; ++v) {
      const cplx a = x[u * w + v];
      const cplx b = x[((h - u) % h) * w + (w - v) % w];
      CHECK(std::abs(a - std::conj(b)) <= 1e-12);
    }
  }
}

TEST_CASE("grid size mismatch is rejected") {
  std::vector<cplx> x(6);
  CHECK_THROWS_AS(fft::forward_2d(x, 2, 4), InvalidInput);
  CHECK_THROWS_AS(fft::inverse_2d(x, 4, 2), InvalidInput);
}

TEST_CASE("empty input is a no-op") {
  std::vector<cplx> x;
  fft::forward(x);
  fft::inverse(x);
  CHECK(x.empty());
}

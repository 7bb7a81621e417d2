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

#include "freqgen/fft.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <utility>
#include <vector>

#include "freqgen/error.hpp"
#include "freqgen/simd/kernels.hpp"

namespace freqgen::fft {
namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

class Radix2 {
 public:
  explicit Radix2(std::size_t n) : n_(n), twiddle_(n / 2), bitrev_(n) {
    for (std::size_t k = 0; k < n / 2; ++k) {
      twiddle_[k] = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(k) /
                                        static_cast<double>(n));
    }
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < n) ++bits;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r = 0;
      for (std::size_t b = 0; b < bits; ++b) r |= ((i >> b) & 1U) << (bits - 1 - b);
      bitrev_[i] = r;
    }
  }

  void run(cplx* x) const {
    for (std::size_t i = 0; i < n_; ++i) {
      if (i < bitrev_[i]) std::swap(x[i], x[bitrev_[i]]);
    }
    for (std::size_t len = 2; len <= n_; len <<= 1) {
      const std::size_t half = len / 2;
      const std::size_t stride = n_ / len;
      for (std::size_t start = 0; start < n_; start += len) {
        for (std::size_t j = 0; j < half; ++j) {
          const cplx w = twiddle_[j * stride];
          const cplx a = x[start + j];
          const cplx b = x[start + j + half];
          const cplx t{w.real() * b.real() - w.imag() * b.imag(),
                       w.real() * b.imag() + w.imag() * b.real()};
          x[start + j] = a + t;
          x[start + j + half] = a - t;
        }
      }
    }
  }

  std::size_t size() const { return n_; }

 private:
  std::size_t n_;
  std::vector<cplx> twiddle_;
  std::vector<std::size_t> bitrev_;
};

class Plan {
 public:
  explicit Plan(std::size_t n) : n_(n) {
    if (is_pow2(n)) {
      radix2_ = std::make_unique<Radix2>(n);
      return;
    }
    const std::size_t m = next_pow2(2 * n - 1);
    radix2_ = std::make_unique<Radix2>(m);
    chirp_.resize(n);
    // k^2 mod 2n keeps the phase argument small for large k.
    const std::size_t period = 2 * n;
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t k2 = (k * k) % period;
      chirp_[k] = std::polar(1.0, -std::numbers::pi * static_cast<double>(k2) /
                                      static_cast<double>(n));
    }
    kernel_.assign(m, cplx{});
    kernel_[0] = std::conj(chirp_[0]);
    for (std::size_t k = 1; k < n; ++k) {
      kernel_[k] = std::conj(chirp_[k]);
      kernel_[m - k] = std::conj(chirp_[k]);
    }
    radix2_->run(kernel_.data());
  }

  void forward(cplx* x) const {
    if (n_ <= 1) return;
    if (chirp_.empty()) {
      radix2_->run(x);
      return;
    }
    const auto& kt = simd::active();
    const std::size_t m = radix2_->size();
    std::vector<cplx> work(m, cplx{});
    kt.complex_mul(x, chirp_.data(), work.data(), n_);
    radix2_->run(work.data());
    kt.complex_mul(work.data(), kernel_.data(), work.data(), m);
    // Inverse length-m transform by conjugation.
    for (auto& v : work) v = std::conj(v);
    radix2_->run(work.data());
    const double scale = 1.0 / static_cast<double>(m);
    for (std::size_t k = 0; k < n_; ++k) work[k] = std::conj(work[k]) * scale;
    kt.complex_mul(work.data(), chirp_.data(), x, n_);
  }

 private:
  std::size_t n_;
  std::unique_ptr<Radix2> radix2_;
  std::vector<cplx> chirp_;
  std::vector<cplx> kernel_;
};

std::shared_ptr<const Plan> plan_for(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, std::shared_ptr<const Plan>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = std::make_shared<const Plan>(n);
  return slot;
}

void inverse_with(const Plan& plan, cplx* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] = std::conj(x[i]);
  plan.forward(x);
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = std::conj(x[i]) * scale;
}

template <bool kInverse>
void transform_2d(std::span<cplx> data, std::size_t h, std::size_t w) {
  if (data.size() != h * w) throw InvalidInput("fft: grid size mismatch");
  if (h == 0 || w == 0) return;
  const auto row_plan = plan_for(w);
  for (std::size_t y = 0; y < h; ++y) {
    if constexpr (kInverse) {
      inverse_with(*row_plan, data.data() + y * w, w);
    } else {
      row_plan->forward(data.data() + y * w);
    }
  }
  const auto col_plan = plan_for(h);
  std::vector<cplx> column(h);
  for (std::size_t x = 0; x < w; ++x) {
    for (std::size_t y = 0; y < h; ++y) column[y] = data[y * w + x];
    if constexpr (kInverse) {
      inverse_with(*col_plan, column.data(), h);
    } else {
      col_plan->forward(column.data());
    }
    for (std::size_t y = 0; y < h; ++y) data[y * w + x] = column[y];
  }
}

}  // namespace

void forward(std::span<cplx> data) {
  if (data.empty()) return;
  plan_for(data.size())->forward(data.data());
}

void inverse(std::span<cplx> data) {
  if (data.empty()) return;
  inverse_with(*plan_for(data.size()), data.data(), data.size());
}

void forward_2d(std::span<cplx> data, std::size_t h, std::size_t w) {
  transform_2d<false>(data, h, w);
}

void inverse_2d(std::span<cplx> data, std::size_t h, std::size_t w) {
  transform_2d<true>(data, h, w);
}

}  // namespace freqgen::fft

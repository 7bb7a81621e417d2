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

#include "freqgen/simd/kernels.hpp"

#if defined(__aarch64__)
#include <arm_neon.h>
#endif

namespace freqgen::simd::detail {

#if defined(__aarch64__)
namespace {

double dot_neon(const double* a, const double* b, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
    acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
  }
  double sum = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

void axpy_neon(double alpha, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(alpha);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i))));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

void correlate_row_neon(const double* src, const double* taps, std::size_t ntaps, double* dst,
                        std::size_t n) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t acc = vdupq_n_f64(0.0);
    for (std::size_t k = 0; k < ntaps; ++k) {
      acc = vaddq_f64(acc, vmulq_f64(vdupq_n_f64(taps[k]), vld1q_f64(src + i + k)));
    }
    vst1q_f64(dst + i, acc);
  }
  for (; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < ntaps; ++k) acc += taps[k] * src[i + k];
    dst[i] = acc;
  }
}

void complex_mul_neon(const std::complex<double>* a, const std::complex<double>* b,
                      std::complex<double>* out, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  double* po = reinterpret_cast<double*>(out);
  const float64x2_t sign = {-1.0, 1.0};
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t va = vld1q_f64(pa + 2 * i);
    const float64x2_t vb = vld1q_f64(pb + 2 * i);
    const float64x2_t b_re = vdupq_laneq_f64(vb, 0);
    const float64x2_t b_im = vdupq_laneq_f64(vb, 1);
    const float64x2_t a_swap = vextq_f64(va, va, 1);
    const float64x2_t t1 = vmulq_f64(va, b_re);
    const float64x2_t t2 = vmulq_f64(vmulq_f64(a_swap, b_im), sign);
    vst1q_f64(po + 2 * i, vaddq_f64(t1, t2));
  }
}

const KernelTable kNeonTable{Isa::kNeon,        "neon",     &dot_neon,
                             &axpy_neon,        &correlate_row_neon,
                             &complex_mul_neon};

}  // namespace

const KernelTable* neon_table() { return &kNeonTable; }

#else

const KernelTable* neon_table() { return nullptr; }

#endif

}  // namespace freqgen::simd::detail

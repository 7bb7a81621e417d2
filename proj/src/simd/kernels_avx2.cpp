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

#if defined(__x86_64__) || defined(_M_X64)
#define FREQGEN_HAVE_AVX2_TU 1
#include <immintrin.h>
#endif

namespace freqgen::simd::detail {

#if FREQGEN_HAVE_AVX2_TU
namespace {

#define FREQGEN_AVX2 __attribute__((target("avx2,fma")))

FREQGEN_AVX2 double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  if (i + 4 <= n) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    i += 4;
  }
  acc0 = _mm256_add_pd(acc0, acc1);
  const __m128d lo = _mm256_castpd256_pd128(acc0);
  const __m128d hi = _mm256_extractf128_pd(acc0, 1);
  __m128d s = _mm_add_pd(lo, hi);
  s = _mm_add_sd(s, _mm_unpackhi_pd(s, s));
  double sum = _mm_cvtsd_f64(s);
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

FREQGEN_AVX2 void axpy_avx2(double alpha, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    // mul + add, not fma: keeps results bit-identical to the scalar loop.
    const __m256d prod = _mm256_mul_pd(va, _mm256_loadu_pd(x + i));
    _mm256_storeu_pd(y + i, _mm256_add_pd(_mm256_loadu_pd(y + i), prod));
  }
  for (; i < n; ++i) y[i] += alpha * x[i];
}

FREQGEN_AVX2 void correlate_row_avx2(const double* src, const double* taps, std::size_t ntaps,
                                     double* dst, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t k = 0; k < ntaps; ++k) {
      const __m256d w = _mm256_set1_pd(taps[k]);
      acc = _mm256_add_pd(acc, _mm256_mul_pd(w, _mm256_loadu_pd(src + i + k)));
    }
    _mm256_storeu_pd(dst + i, acc);
  }
  for (; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < ntaps; ++k) acc += taps[k] * src[i + k];
    dst[i] = acc;
  }
}

FREQGEN_AVX2 void complex_mul_avx2(const std::complex<double>* a, const std::complex<double>* b,
                                   std::complex<double>* out, std::size_t n) {
  const double* pa = reinterpret_cast<const double*>(a);
  const double* pb = reinterpret_cast<const double*>(b);
  double* po = reinterpret_cast<double*>(out);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d va = _mm256_loadu_pd(pa + 2 * i);
    const __m256d vb = _mm256_loadu_pd(pb + 2 * i);
    const __m256d b_re = _mm256_movedup_pd(vb);
    const __m256d b_im = _mm256_permute_pd(vb, 0xF);
    const __m256d a_swap = _mm256_permute_pd(va, 0x5);
    const __m256d t1 = _mm256_mul_pd(va, b_re);
    const __m256d t2 = _mm256_mul_pd(a_swap, b_im);
    _mm256_storeu_pd(po + 2 * i, _mm256_addsub_pd(t1, t2));
  }
  for (; i < n; ++i) {
    const double ar = a[i].real(), ai = a[i].imag();
    const double br = b[i].real(), bi = b[i].imag();
    out[i] = {ar * br - ai * bi, ai * br + ar * bi};
  }
}

#undef FREQGEN_AVX2

const KernelTable kAvx2Table{Isa::kAvx2,        "avx2",     &dot_avx2,
                             &axpy_avx2,        &correlate_row_avx2,
                             &complex_mul_avx2};

}  // namespace

const KernelTable* avx2_table() {
  __builtin_cpu_init();
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) return &kAvx2Table;
  return nullptr;
}

#else

const KernelTable* avx2_table() { return nullptr; }

#endif

}  // namespace freqgen::simd::detail

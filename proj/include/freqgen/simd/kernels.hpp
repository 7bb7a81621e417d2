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

#include <complex>
#include <cstddef>
#include <string_view>
#include <vector>

// Data-parallel inner loops. Every kernel has a scalar reference
// implementation; vector variants are picked once at startup from the
// CPU's capabilities and must agree with the reference (see
// tests/unit/simd_kernels_test.cpp). FREQGEN_SIMD=scalar|avx2|neon
// forces a variant.

namespace freqgen::simd {

enum class Isa { kScalar, kAvx2, kNeon };

struct KernelTable {
  Isa isa;
  const char* name;

  /// sum_i a[i] * b[i]
  double (*dot)(const double* a, const double* b, std::size_t n);

  /// y[i] += alpha * x[i]
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);

  /// dst[i] = sum_k taps[k] * src[i + k], i < n. src holds n + ntaps - 1 values.
  void (*correlate_row)(const double* src, const double* taps, std::size_t ntaps,
                        double* dst, std::size_t n);

  /// out[i] = a[i] * b[i] (complex product, no special inf/nan handling)
  void (*complex_mul)(const std::complex<double>* a, const std::complex<double>* b,
                      std::complex<double>* out, std::size_t n);
};

/// Kernel table used by the library. Chosen on first call.
const KernelTable& active();

/// Table for a specific ISA; throws InvalidParameter if the CPU (or the
/// build) does not support it.
const KernelTable& table_for(Isa isa);

/// ISAs usable on this machine, scalar first.
std::vector<Isa> available();

std::string_view isa_name(Isa isa);

namespace detail {
extern const KernelTable kScalarTable;
// Null when the build target lacks the ISA.
const KernelTable* avx2_table();
const KernelTable* neon_table();
}  // namespace detail

}  // namespace freqgen::simd

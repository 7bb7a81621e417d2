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
#include <span>

// Row-major dense products on top of the active SIMD kernel table.

namespace freqgen::linalg {

/// c (n x m) = a (n x k) * b^T, where b is (m x k).
void matmul_abt(std::span<const double> a, std::span<const double> b, std::span<double> c,
                std::size_t n, std::size_t k, std::size_t m);

/// c (n x m) = a (n x k) * b (k x m).
void matmul_ab(std::span<const double> a, std::span<const double> b, std::span<double> c,
               std::size_t n, std::size_t k, std::size_t m);

/// c (k x m) += a^T * b, where a is (n x k) and b is (n x m).
void matmul_atb_acc(std::span<const double> a, std::span<const double> b, std::span<double> c,
                    std::size_t n, std::size_t k, std::size_t m);

}  // namespace freqgen::linalg

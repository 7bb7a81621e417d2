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
#include <span>

// Unnormalized forward DFT, X[k] = sum_n x[n] exp(-2 pi i k n / N), and its
// exact inverse (scaled by 1/N). Power-of-two lengths run an iterative
// radix-2 transform; other lengths go through Bluestein's chirp-z
// reformulation on a padded power-of-two grid. Plans are cached per length
// and shared across threads.

namespace freqgen::fft {

using cplx = std::complex<double>;

void forward(std::span<cplx> data);
void inverse(std::span<cplx> data);

/// Row-major h x w grid, rows then columns.
void forward_2d(std::span<cplx> data, std::size_t h, std::size_t w);
void inverse_2d(std::span<cplx> data, std::size_t h, std::size_t w);

}  // namespace freqgen::fft

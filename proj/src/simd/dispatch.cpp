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

#include <cstdlib>
#include <string>

#include "freqgen/error.hpp"
#include "freqgen/simd/kernels.hpp"

namespace freqgen::simd {
namespace {

const KernelTable* lookup(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return &detail::kScalarTable;
    case Isa::kAvx2:
      return detail::avx2_table();
    case Isa::kNeon:
      return detail::neon_table();
  }
  return nullptr;
}

const KernelTable& select() {
  if (const char* forced = std::getenv("FREQGEN_SIMD"); forced != nullptr && *forced != '\0') {
    const std::string want(forced);
    for (Isa isa : {Isa::kScalar, Isa::kAvx2, Isa::kNeon}) {
      if (want == isa_name(isa)) return table_for(isa);
    }
    throw InvalidParameter("FREQGEN_SIMD: unknown variant '" + want + "'");
  }
  if (const KernelTable* t = detail::avx2_table()) return *t;
  if (const KernelTable* t = detail::neon_table()) return *t;
  return detail::kScalarTable;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
    case Isa::kNeon:
      return "neon";
  }
  return "unknown";
}

const KernelTable& active() {
  static const KernelTable& table = select();
  return table;
}

const KernelTable& table_for(Isa isa) {
  const KernelTable* t = lookup(isa);
  if (t == nullptr) {
    throw InvalidParameter("SIMD variant '" + std::string(isa_name(isa)) +
                           "' is not available on this CPU");
  }
  return *t;
}

std::vector<Isa> available() {
  std::vector<Isa> out{Isa::kScalar};
  if (detail::avx2_table() != nullptr) out.push_back(Isa::kAvx2);
  if (detail::neon_table() != nullptr) out.push_back(Isa::kNeon);
  return out;
}

}  // namespace freqgen::simd

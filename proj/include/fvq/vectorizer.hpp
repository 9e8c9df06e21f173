// Copyright 2026 The fvq Authors
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
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "fvq/iq_stream.hpp"

namespace fvq {

enum class VectorLayout : std::uint8_t {
  consecutive_same_component = 1,  // Method 1: I run, then Q run
  iq_interleaved = 2,              // Method 2: I0 Q0 I1 Q1 ...
  random_permutation = 3,          // Method 3: seeded shuffle of all 2M components
};

// Fixed-length real vectors stored row-major.
struct VectorBatch {
  int l_vq = 1;
  std::vector<double> values;
  VectorLayout layout = VectorLayout::consecutive_same_component;
  std::uint64_t permutation_seed = 0;
  std::size_t original_count = 0;  // complex samples before padding

  std::size_t size() const { return l_vq > 0 ? values.size() / static_cast<std::size_t>(l_vq) : 0; }
  bool empty() const { return values.empty(); }
  std::span<const double> operator[](std::size_t i) const {
    return {values.data() + i * static_cast<std::size_t>(l_vq), static_cast<std::size_t>(l_vq)};
  }
  std::span<double> operator[](std::size_t i) {
    return {values.data() + i * static_cast<std::size_t>(l_vq), static_cast<std::size_t>(l_vq)};
  }
};

// ceil(2M / l_vq) vectors; the tail is zero-padded.
VectorBatch vectorize(const IQStream& stream, VectorLayout layout, int l_vq, std::uint64_t seed = 0);

// Exact inverse of vectorize. Sample rate is not carried by the batch.
IQStream devectorize(const VectorBatch& batch);

// Empirical entropy, in bits per vector, of the sign-orthant each vector
// falls in (zero counts as positive). Always within [0, l_vq].
double orthant_entropy(const VectorBatch& batch);

// Component order used by Method 3: position k of the flattened batch holds
// component order[k] of the Method-2 interleaved sequence.
std::vector<std::size_t> component_permutation(std::size_t components, std::uint64_t seed);

std::string_view to_string(VectorLayout layout);
VectorLayout parse_layout(std::string_view s);

}  // namespace fvq

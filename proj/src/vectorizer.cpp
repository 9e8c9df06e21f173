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

#include "fvq/vectorizer.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <unordered_map>

#include "fvq/error.hpp"
#include "fvq/random.hpp"

namespace fvq {

std::vector<std::size_t> component_permutation(std::size_t components, std::uint64_t seed) {
  std::vector<std::size_t> order(components);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = components; i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(order[i - 1], order[j]);
  }
  return order;
}

VectorBatch vectorize(const IQStream& stream, VectorLayout layout, int l_vq, std::uint64_t seed) {
  require(l_vq >= 1, "vectorize: l_vq must be >= 1");
  const std::size_t m = stream.size();
  const std::size_t comps = 2 * m;
  const auto l = static_cast<std::size_t>(l_vq);
  VectorBatch batch;
  batch.l_vq = l_vq;
  batch.layout = layout;
  batch.permutation_seed = layout == VectorLayout::random_permutation ? seed : 0;
  batch.original_count = m;
  batch.values.assign((comps + l - 1) / l * l, 0.0);
  auto& v = batch.values;
  switch (layout) {
    case VectorLayout::consecutive_same_component:
      for (std::size_t i = 0; i < m; ++i) {
        v[i] = stream.samples[i].real();
        v[m + i] = stream.samples[i].imag();
      }
      break;
    case VectorLayout::iq_interleaved:
      for (std::size_t i = 0; i < m; ++i) {
        v[2 * i] = stream.samples[i].real();
        v[2 * i + 1] = stream.samples[i].imag();
      }
      break;
    case VectorLayout::random_permutation: {
      const auto order = component_permutation(comps, seed);
      for (std::size_t k = 0; k < comps; ++k) {
        const std::size_t c = order[k];
        v[k] = (c & 1U) ? stream.samples[c >> 1].imag() : stream.samples[c >> 1].real();
      }
      break;
    }
    default:
      throw ContractError("vectorize: unknown layout");
  }
  return batch;
}

IQStream devectorize(const VectorBatch& batch) {
  require(batch.l_vq >= 1, "devectorize: l_vq must be >= 1");
  const std::size_t m = batch.original_count;
  const std::size_t comps = 2 * m;
  const auto l = static_cast<std::size_t>(batch.l_vq);
  if (batch.values.size() % l != 0 || batch.values.size() != (comps + l - 1) / l * l) {
    throw FormatError("devectorize: " + std::to_string(batch.size()) + " vectors inconsistent with " +
                      std::to_string(m) + " samples at l_vq=" + std::to_string(l));
  }
  IQStream out;
  out.samples.resize(m);
  const auto& v = batch.values;
  switch (batch.layout) {
    case VectorLayout::consecutive_same_component:
      for (std::size_t i = 0; i < m; ++i) out.samples[i] = Complex(v[i], v[m + i]);
      break;
    case VectorLayout::iq_interleaved:
      for (std::size_t i = 0; i < m; ++i) out.samples[i] = Complex(v[2 * i], v[2 * i + 1]);
      break;
    case VectorLayout::random_permutation: {
      const auto order = component_permutation(comps, batch.permutation_seed);
      std::vector<double> flat(comps);
      for (std::size_t k = 0; k < comps; ++k) flat[order[k]] = v[k];
      for (std::size_t i = 0; i < m; ++i) out.samples[i] = Complex(flat[2 * i], flat[2 * i + 1]);
      break;
    }
    default:
      throw FormatError("devectorize: unknown layout");
  }
  return out;
}

double orthant_entropy(const VectorBatch& batch) {
  require(!batch.empty(), "orthant_entropy: empty batch");
  require(batch.l_vq <= 63, "orthant_entropy: l_vq too large");
  std::unordered_map<std::uint64_t, std::size_t> counts;
  const std::size_t n = batch.size();
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t code = 0;
    for (double x : batch[i]) code = (code << 1) | (x < 0.0 ? 1U : 0U);
    ++counts[code];
  }
  double h = 0.0;
  for (const auto& [code, c] : counts) {
    const double p = static_cast<double>(c) / static_cast<double>(n);
    h -= p * std::log2(p);
  }
  return std::max(0.0, h);
}

std::string_view to_string(VectorLayout layout) {
  switch (layout) {
    case VectorLayout::consecutive_same_component: return "method1";
    case VectorLayout::iq_interleaved: return "method2";
    case VectorLayout::random_permutation: return "method3";
  }
  return "?";
}

VectorLayout parse_layout(std::string_view s) {
  if (s == "method1" || s == "1" || s == "consecutive_same_component") {
    return VectorLayout::consecutive_same_component;
  }
  if (s == "method2" || s == "2" || s == "iq_interleaved") return VectorLayout::iq_interleaved;
  if (s == "method3" || s == "3" || s == "random_permutation") return VectorLayout::random_permutation;
  throw ContractError("unknown vector layout: " + std::string(s));
}

}  // namespace fvq

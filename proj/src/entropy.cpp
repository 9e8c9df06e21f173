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

#include "fvq/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <string>

#include "fvq/error.hpp"

namespace fvq {

std::vector<double> estimate_pmf(std::span<const std::uint32_t> indices, std::uint32_t alphabet_size) {
  require(alphabet_size >= 1, "estimate_pmf: alphabet size must be >= 1");
  std::vector<std::uint64_t> counts(alphabet_size, 0);
  for (std::uint32_t i : indices) {
    require(i < alphabet_size, "estimate_pmf: index " + std::to_string(i) + " outside alphabet of " +
                                   std::to_string(alphabet_size));
    ++counts[i];
  }
  return pmf_from_counts(counts);
}

std::vector<double> pmf_from_counts(std::span<const std::uint64_t> counts) {
  require(!counts.empty(), "pmf_from_counts: empty alphabet");
  const double total =
      static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::uint64_t{0})) +
      static_cast<double>(counts.size());
  std::vector<double> pmf(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) pmf[i] = (static_cast<double>(counts[i]) + 1.0) / total;
  return pmf;
}

double entropy_bits(std::span<const double> pmf) {
  double h = 0.0;
  for (double p : pmf) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

namespace {

void build_canonical(HuffmanTable& t) {
  const std::size_t n = t.lengths.size();
  t.alphabet_size = static_cast<std::uint32_t>(n);
  t.max_length = n ? *std::max_element(t.lengths.begin(), t.lengths.end()) : 0;
  require(t.max_length <= kMaxHuffmanLength, "huffman: code length exceeds 63 bits");
  t.count.assign(t.max_length + 1U, 0);
  for (auto len : t.lengths) {
    if (len == 0) throw FormatError("huffman: zero code length");
    ++t.count[len];
  }
  t.sorted_symbols.resize(n);
  std::iota(t.sorted_symbols.begin(), t.sorted_symbols.end(), 0U);
  std::stable_sort(t.sorted_symbols.begin(), t.sorted_symbols.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return t.lengths[a] < t.lengths[b]; });
  t.first_code.assign(t.max_length + 1U, 0);
  t.first_index.assign(t.max_length + 1U, 0);
  std::uint64_t code = 0;
  std::uint32_t index = 0;
  for (unsigned len = 1; len <= t.max_length; ++len) {
    code <<= 1;
    t.first_code[len] = code;
    t.first_index[len] = index;
    code += t.count[len];
    index += t.count[len];
    if (len < 64 && code > (std::uint64_t{1} << len)) throw FormatError("huffman: code lengths violate Kraft");
  }
  t.codes.assign(n, 0);
  for (unsigned len = 1; len <= t.max_length; ++len) {
    for (std::uint32_t k = 0; k < t.count[len]; ++k) {
      t.codes[t.sorted_symbols[t.first_index[len] + k]] = t.first_code[len] + k;
    }
  }
}

}  // namespace

HuffmanTable build_huffman(std::span<const double> pmf) {
  require(!pmf.empty(), "build_huffman: alphabet size must be >= 1");
  require(pmf.size() < (std::size_t{1} << 31), "build_huffman: alphabet too large");
  for (double p : pmf) require(std::isfinite(p) && p >= 0.0, "build_huffman: invalid probability");
  const std::size_t n = pmf.size();
  HuffmanTable t;
  t.lengths.assign(n, 1);
  if (n > 1) {
    // Nodes 0..n-1 are leaves; internal nodes are appended. Ties resolve by
    // node id so the code is a pure function of the PMF.
    std::vector<std::uint32_t> parent(2 * n - 1, 0);
    using Item = std::pair<double, std::uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    for (std::uint32_t i = 0; i < n; ++i) heap.emplace(pmf[i], i);
    auto next = static_cast<std::uint32_t>(n);
    while (heap.size() > 1) {
      const auto a = heap.top();
      heap.pop();
      const auto b = heap.top();
      heap.pop();
      parent[a.second] = next;
      parent[b.second] = next;
      heap.emplace(a.first + b.first, next);
      ++next;
    }
    const std::uint32_t root = next - 1;
    std::vector<std::uint32_t> depth(2 * n - 1, 0);
    for (std::uint32_t v = root; v-- > 0;) depth[v] = depth[parent[v]] + 1;
    for (std::size_t i = 0; i < n; ++i) {
      require(depth[i] <= kMaxHuffmanLength, "build_huffman: code length exceeds 63 bits");
      t.lengths[i] = static_cast<std::uint8_t>(depth[i]);
    }
  }
  build_canonical(t);
  t.avg_length = average_length(t, pmf);
  return t;
}

HuffmanTable table_from_lengths(std::vector<std::uint8_t> lengths) {
  if (lengths.empty()) throw FormatError("huffman: empty alphabet");
  HuffmanTable t;
  t.lengths = std::move(lengths);
  build_canonical(t);
  return t;
}

double average_length(const HuffmanTable& table, std::span<const double> pmf) {
  require(pmf.size() == table.lengths.size(), "average_length: PMF size mismatch");
  const double total = std::accumulate(pmf.begin(), pmf.end(), 0.0);
  double acc = 0.0;
  for (std::size_t i = 0; i < pmf.size(); ++i) acc += pmf[i] * table.lengths[i];
  return total > 0.0 ? acc / total : 0.0;
}

double kraft_sum(const HuffmanTable& table) {
  double s = 0.0;
  for (auto len : table.lengths) s += std::ldexp(1.0, -static_cast<int>(len));
  return s;
}

void huffman_encode(const HuffmanTable& table, std::span<const std::uint32_t> indices, BitWriter& out) {
  for (std::uint32_t i : indices) {
    require(i < table.alphabet_size, "huffman_encode: symbol " + std::to_string(i) + " outside alphabet");
    out.put(table.codes[i], table.lengths[i]);
  }
}

std::vector<std::uint32_t> huffman_decode(const HuffmanTable& table, BitReader& in, std::size_t count) {
  std::vector<std::uint32_t> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    std::uint64_t code = 0;
    bool found = false;
    for (unsigned len = 1; len <= table.max_length; ++len) {
      if (in.remaining() == 0) throw FormatError("huffman: bitstream truncated");
      code = (code << 1) | in.bit();
      if (table.count[len] != 0 && code >= table.first_code[len] && code - table.first_code[len] < table.count[len]) {
        out.push_back(table.sorted_symbols[table.first_index[len] + (code - table.first_code[len])]);
        found = true;
        break;
      }
    }
    if (!found) throw FormatError("huffman: invalid codeword");
  }
  return out;
}

std::uint64_t encoded_bits(const HuffmanTable& table, std::span<const std::uint32_t> indices) {
  std::uint64_t bits = 0;
  for (std::uint32_t i : indices) {
    require(i < table.alphabet_size, "encoded_bits: symbol outside alphabet");
    bits += table.lengths[i];
  }
  return bits;
}

double ec_gain(double l_huff, int l_vq, int q_vq) {
  require(l_huff > 0.0, "ec_gain: average length must be positive");
  return static_cast<double>(l_vq) * static_cast<double>(q_vq) / l_huff;
}

double ec_gain(const HuffmanTable& table, int l_vq, int q_vq) { return ec_gain(table.avg_length, l_vq, q_vq); }

void write_huffman(ByteWriter& out, const HuffmanTable& table) {
  out.u32(table.alphabet_size);
  out.raw(table.lengths);
}

HuffmanTable read_huffman(ByteReader& in) {
  const std::uint32_t n = in.u32();
  if (n == 0) throw FormatError("huffman: empty alphabet");
  if (n > in.remaining()) throw FormatError("huffman: table truncated");
  const auto raw = in.raw(n);
  return table_from_lengths(std::vector<std::uint8_t>(raw.begin(), raw.end()));
}

}  // namespace fvq

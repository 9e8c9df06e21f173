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
#include <vector>

#include "fvq/bit_io.hpp"

namespace fvq {

// Canonical Huffman code. Codewords are assigned in (length, symbol) order.
struct HuffmanTable {
  std::uint32_t alphabet_size = 0;
  std::vector<std::uint8_t> lengths;
  std::vector<std::uint64_t> codes;
  double avg_length = 0.0;  // L_HUFF under the PMF the table was built from

  // Canonical decoding tables, indexed by code length.
  std::vector<std::uint64_t> first_code;
  std::vector<std::uint32_t> first_index;
  std::vector<std::uint32_t> count;
  std::vector<std::uint32_t> sorted_symbols;
  std::uint8_t max_length = 0;
};

inline constexpr int kMaxHuffmanLength = 63;

// Add-one smoothed frequencies.
std::vector<double> estimate_pmf(std::span<const std::uint32_t> indices, std::uint32_t alphabet_size);
std::vector<double> pmf_from_counts(std::span<const std::uint64_t> counts);

// Shannon entropy in bits.
double entropy_bits(std::span<const double> pmf);

HuffmanTable build_huffman(std::span<const double> pmf);
// Rebuilds the canonical table from code lengths. avg_length is left at 0.
HuffmanTable table_from_lengths(std::vector<std::uint8_t> lengths);
// Sum over symbols of pmf * length.
double average_length(const HuffmanTable& table, std::span<const double> pmf);

// Kraft sum of the code lengths.
double kraft_sum(const HuffmanTable& table);

void huffman_encode(const HuffmanTable& table, std::span<const std::uint32_t> indices, BitWriter& out);
std::vector<std::uint32_t> huffman_decode(const HuffmanTable& table, BitReader& in, std::size_t count);
// Exact number of bits huffman_encode emits.
std::uint64_t encoded_bits(const HuffmanTable& table, std::span<const std::uint32_t> indices);

// (l_vq * q_vq) / avg_length.
double ec_gain(const HuffmanTable& table, int l_vq, int q_vq);
double ec_gain(double l_huff, int l_vq, int q_vq);

// u32 alphabet size, then one length byte per symbol.
void write_huffman(ByteWriter& out, const HuffmanTable& table);
HuffmanTable read_huffman(ByteReader& in);

}  // namespace fvq

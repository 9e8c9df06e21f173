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

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fvq/entropy.hpp"
#include "fvq/iq_stream.hpp"
#include "fvq/msvq.hpp"
#include "fvq/vq.hpp"

namespace fvq {

struct UpmgqConfig {
  int theta = 0;         // levels >= theta form the high group
  int q_high = 4;        // bits per component of the high-group VQ
  int l_upmgq = 2;       // high-group vector length
  int q_low = 4;         // bits of the low-group scalar quantizer
  int q0 = 15;
  bool low_entropy = false;  // Huffman-code the low group as well
  void validate() const;
};

// s = sign * (high + low), high a multiple of 2^theta, 0 <= low < 2^theta.
struct Expansion {
  int sign = 1;
  double high = 0.0;
  double low = 0.0;
};

Expansion expand(double sample, int theta);
inline double reconstruct(const Expansion& e) { return e.sign * (e.high + e.low); }

// P(bit = 1) at binary levels [min_level, max_level] of |component|, and
// P(negative) for the sign level, over every I and Q component.
struct LevelStatistics {
  int min_level = 0;
  int max_level = 0;
  std::vector<double> p_one;  // index k - min_level
  double sign_p = 0.0;
  std::size_t components = 0;
};
LevelStatistics level_statistics(const IQStream& stream, int min_level, int max_level);

struct UpmgqCodebook {
  UpmgqConfig config;
  Codebook high_vq;                  // integer codewords in units of 2^theta
  std::vector<double> low_points;    // 2^q_low midpoints inside [0, 2^theta)
  HuffmanTable huffman_high;
  std::optional<HuffmanTable> huffman_low;
  void validate() const;
};

// Uniform low-group quantizer.
std::vector<double> low_reconstruction_points(int theta, int q_low);
std::uint32_t quantize_low(double low, int theta, int q_low);

UpmgqCodebook train_upmgq(const IQStream& stream, const UpmgqConfig& config, TrainerKind trainer, int trials,
                          const LloydStop& stop, std::uint64_t seed, unsigned threads = 0,
                          CodebookInit init = CodebookInit::uniform);

// Components are taken in Method-1 order and grouped l_upmgq at a time; the
// last group is zero-padded.
struct UpmgqSymbols {
  std::vector<std::uint8_t> negative;  // G1, one per component
  std::vector<std::uint32_t> high;     // G2, one per group
  std::vector<std::uint32_t> low;      // G3, one per component
  std::size_t sample_count = 0;        // complex samples represented
};

// Exhaustive mode visits every high codeword and every low point once per
// group, so stats count SO = 2^(q_high l) + 2^q_low per group.
UpmgqSymbols quantize_upmgq(const UpmgqCodebook& cb, const IQStream& stream,
                            SearchMode mode = SearchMode::accelerated, SearchStats* stats = nullptr,
                            unsigned threads = 0);
IQStream dequantize_upmgq(const UpmgqCodebook& cb, const UpmgqSymbols& symbols);

// q0 / (1 + L_HIGH / l + L_LOW).
double cr_upmgq(double l_high, int l_upmgq, double l_low, int q0);

// SO = CS = 2^(q_high l) + 2^q_low.
Complexity upmgq_complexity(const UpmgqConfig& config);

// UPMG layout: magic "UPMG\0\0\0\0", u8 version, i8 theta, u8 q_high, u8 l,
// u8 q_low, u8 q0, u8 low_entropy, high-group VQCB block with its Huffman
// table, then [low Huffman table] when low_entropy is set.
std::vector<std::uint8_t> encode_upmgq_model(const UpmgqCodebook& cb);
UpmgqCodebook decode_upmgq_model(std::span<const std::uint8_t> bytes);

}  // namespace fvq

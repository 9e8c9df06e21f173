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
#include <span>
#include <string>
#include <vector>

#include "fvq/entropy.hpp"
#include "fvq/vq.hpp"

namespace fvq {

struct Complexity {
  std::uint64_t searching_operations = 0;  // SO, codeword visits per vector
  std::uint64_t codebook_size = 0;         // CS, stored codewords
  friend bool operator==(const Complexity&, const Complexity&) = default;
};

// Stage 1 partitions the space; stage2[i] refines cell i.
struct MsvqCodebook {
  int l = 2;
  int q1 = 3;
  int q2 = 3;
  Codebook stage1;
  std::vector<Codebook> stage2;

  std::uint64_t stored_codewords() const;
  void validate() const;
};

struct MsvqIndex {
  std::uint32_t i1 = 0;
  std::uint32_t i2 = 0;
};

// Default split of a total budget Q: q1 = floor(Q / 2), q2 = Q - q1.
inline int msvq_stage1_bits(int total) { return total / 2; }

struct MsvqTrainReport {
  int underpopulated_cells = 0;  // stage-1 cells with fewer members than stage-2 codewords
};

MsvqCodebook train_msvq(const VectorBatch& batch, int q1, int q2, TrainerKind trainer, int trials,
                        const LloydStop& stop, std::uint64_t seed, MsvqTrainReport* report = nullptr,
                        unsigned threads = 0, CodebookInit init = CodebookInit::uniform);

// Exhaustive search in both stages; stats counts 2^(q1 l) + 2^(q2 l) per vector.
MsvqIndex quantize_msvq(const MsvqCodebook& cb, std::span<const double> vector, SearchStats* stats = nullptr);
std::span<const float> dequantize_msvq(const MsvqCodebook& cb, MsvqIndex index);

std::vector<MsvqIndex> quantize_msvq_batch(const MsvqCodebook& cb, const VectorBatch& batch,
                                           SearchMode mode = SearchMode::accelerated, SearchStats* stats = nullptr,
                                           unsigned threads = 0);
VectorBatch dequantize_msvq_batch(const MsvqCodebook& cb, std::span<const MsvqIndex> indices);

// Joint index i1 * 2^(q2 l) + i2, the symbol the entropy coder sees.
std::uint32_t msvq_joint(const MsvqCodebook& cb, MsvqIndex index);
MsvqIndex msvq_split(const MsvqCodebook& cb, std::uint32_t joint);

// SO = 2^(q1 l) + 2^(q2 l), CS = 2^(q1 l) + 2^((q1 + q2) l).
Complexity msvq_complexity(int q1, int q2, int l);

struct MsvqModel {
  MsvqCodebook codebook;
  HuffmanTable huffman;  // over joint indices
};

MsvqModel make_msvq_model(MsvqCodebook codebook);

// VQMS layout: magic "VQMS\0\0\0\0", u8 version, u8 q1, u8 q2, u8 l, stage-1
// VQCB block, 2^(q1 l) stage-2 VQCB blocks, u8 flag, [joint Huffman table].
std::vector<std::uint8_t> encode_msvq_model(const MsvqModel& model);
MsvqModel decode_msvq_model(std::span<const std::uint8_t> bytes);

}  // namespace fvq

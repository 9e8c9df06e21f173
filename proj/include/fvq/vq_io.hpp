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
#include <filesystem>
#include <span>
#include <vector>

#include "fvq/bit_io.hpp"
#include "fvq/entropy.hpp"
#include "fvq/vq.hpp"

namespace fvq {

// A trained codebook plus the Huffman table over its indices.
struct VqModel {
  Codebook codebook;
  HuffmanTable huffman;
};

// Table built from the codebook's usage counts (add-one smoothed).
HuffmanTable huffman_from_usage(const Codebook& codebook);
VqModel make_vq_model(Codebook codebook);

// VQCB layout (little-endian):
//   8 bytes  magic "VQCB\0\0\0\0"
//   u8       version (1)
//   u8 l_vq, u8 q_vq
//   u32      codeword count K
//   K*l_vq   f32 codewords, row-major
//   K        u64 usage counts
//   u8 trainer, u32 trials, u32 iterations, f64 final distortion, u64 seed
//   u8       Huffman table present
//   [u32 alphabet size, alphabet x u8 code lengths]
void write_vqcb(ByteWriter& out, const Codebook& codebook, const HuffmanTable* huffman);
// Reads one VQCB block. `huffman` receives the table when present.
Codebook read_vqcb(ByteReader& in, HuffmanTable* huffman = nullptr, bool* has_huffman = nullptr);

std::vector<std::uint8_t> encode_vq_model(const VqModel& model);
VqModel decode_vq_model(std::span<const std::uint8_t> bytes);

}  // namespace fvq

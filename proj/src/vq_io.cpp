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

#include "fvq/vq_io.hpp"

#include <bit>
#include <string>

#include "fvq/error.hpp"

namespace fvq {
namespace {
constexpr std::string_view kMagic{"VQCB\0\0\0\0", 8};
constexpr std::uint8_t kVersion = 1;
}  // namespace

HuffmanTable huffman_from_usage(const Codebook& codebook) {
  if (codebook.usage_counts.size() == codebook.size()) return build_huffman(pmf_from_counts(codebook.usage_counts));
  const std::vector<std::uint64_t> zeros(codebook.size(), 0);
  return build_huffman(pmf_from_counts(zeros));
}

VqModel make_vq_model(Codebook codebook) {
  VqModel m;
  m.huffman = huffman_from_usage(codebook);
  m.codebook = std::move(codebook);
  return m;
}

void write_vqcb(ByteWriter& out, const Codebook& codebook, const HuffmanTable* huffman) {
  codebook.validate();
  require(codebook.l_vq < 256 && codebook.q_vq < 256, "VQCB: geometry does not fit a byte");
  require(codebook.size() <= 0xFFFFFFFFULL, "VQCB: codebook too large");
  out.tag(kMagic);
  out.u8(kVersion);
  out.u8(static_cast<std::uint8_t>(codebook.l_vq));
  out.u8(static_cast<std::uint8_t>(codebook.q_vq));
  out.u32(static_cast<std::uint32_t>(codebook.size()));
  for (float c : codebook.codewords) out.f32(c);
  for (std::size_t k = 0; k < codebook.size(); ++k) {
    out.u64(codebook.usage_counts.empty() ? 0 : codebook.usage_counts[k]);
  }
  out.u8(static_cast<std::uint8_t>(codebook.meta.algorithm));
  out.u32(static_cast<std::uint32_t>(codebook.meta.trials));
  out.u32(static_cast<std::uint32_t>(codebook.meta.iterations));
  out.u64(std::bit_cast<std::uint64_t>(codebook.meta.final_distortion));
  out.u64(codebook.meta.seed);
  out.u8(huffman ? 1 : 0);
  if (huffman) {
    require(huffman->alphabet_size == codebook.size(), "VQCB: Huffman alphabet does not match codebook");
    write_huffman(out, *huffman);
  }
}

Codebook read_vqcb(ByteReader& in, HuffmanTable* huffman, bool* has_huffman) {
  in.expect_tag(kMagic, "VQCB codebook");
  const auto version = in.u8();
  if (version != kVersion) throw FormatError("VQCB: unsupported version " + std::to_string(version));
  Codebook cb;
  cb.l_vq = in.u8();
  cb.q_vq = in.u8();
  if (cb.l_vq < 1) throw FormatError("VQCB: l_vq must be >= 1");
  const std::uint32_t count = in.u32();
  if (static_cast<long>(cb.l_vq) * cb.q_vq > 32 || count != codebook_size(cb.l_vq, cb.q_vq)) {
    throw FormatError("VQCB: codeword count " + std::to_string(count) + " does not match geometry");
  }
  const std::size_t entries = static_cast<std::size_t>(count) * static_cast<std::size_t>(cb.l_vq);
  if (in.remaining() < entries * 4 + static_cast<std::size_t>(count) * 8) throw FormatError("VQCB: truncated");
  cb.codewords.resize(entries);
  for (auto& c : cb.codewords) c = in.f32();
  cb.usage_counts.resize(count);
  for (auto& u : cb.usage_counts) u = in.u64();
  const auto algo = in.u8();
  if (algo > 1) throw FormatError("VQCB: unknown trainer id");
  cb.meta.algorithm = static_cast<TrainerKind>(algo);
  cb.meta.trials = static_cast<int>(in.u32());
  cb.meta.iterations = static_cast<int>(in.u32());
  cb.meta.final_distortion = std::bit_cast<double>(in.u64());
  cb.meta.seed = in.u64();
  try {
    cb.validate();
  } catch (const ContractError& e) {
    throw FormatError(std::string("VQCB: ") + e.what());
  }
  const auto flag = in.u8();
  if (flag > 1) throw FormatError("VQCB: bad Huffman flag");
  if (has_huffman) *has_huffman = flag == 1;
  if (flag == 1) {
    HuffmanTable t = read_huffman(in);
    if (t.alphabet_size != count) throw FormatError("VQCB: Huffman alphabet does not match codebook");
    if (huffman) *huffman = std::move(t);
  }
  return cb;
}

std::vector<std::uint8_t> encode_vq_model(const VqModel& model) {
  ByteWriter out;
  write_vqcb(out, model.codebook, &model.huffman);
  return out.take();
}

VqModel decode_vq_model(std::span<const std::uint8_t> bytes) {
  ByteReader in(bytes);
  VqModel m;
  bool has = false;
  m.codebook = read_vqcb(in, &m.huffman, &has);
  if (!has) m.huffman = huffman_from_usage(m.codebook);
  if (in.remaining() != 0) throw FormatError("VQCB: trailing bytes");
  return m;
}

}  // namespace fvq

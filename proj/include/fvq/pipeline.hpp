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
#include <filesystem>
#include <span>
#include <variant>
#include <vector>

#include "fvq/iq_stream.hpp"
#include "fvq/msvq.hpp"
#include "fvq/profile.hpp"
#include "fvq/upmgq.hpp"
#include "fvq/vq_io.hpp"

namespace fvq {

// std::monostate stands for the raw passthrough, which needs no codebook.
using QuantizerModel = std::variant<std::monostate, VqModel, MsvqModel, UpmgqCodebook>;

std::vector<std::uint8_t> encode_model(const QuantizerModel& model);
// Dispatches on the container magic (VQCB, VQMS or UPMG).
QuantizerModel decode_model(std::span<const std::uint8_t> bytes);
void save_model(const std::filesystem::path& path, const QuantizerModel& model);
QuantizerModel load_model(const std::filesystem::path& path);
QuantizerKind model_kind(const QuantizerModel& model);
// Throws ContractError when the model does not match the profile geometry.
void check_model(const CompressionProfile& profile, const QuantizerModel& model);

// Output of the stages ahead of the quantizer.
struct FrontEnd {
  IQStream stream;  // fixed-point, block-scaled when scaling is enabled
  std::optional<ScaleFactors> scale;
  std::size_t input_samples = 0;
  std::size_t after_cp = 0;
  std::size_t after_decimation = 0;
};

FrontEnd front_end(const IQStream& stream, const CompressionProfile& profile);
// Inverse of front_end given the quantizer's reconstruction of its stream.
IQStream back_end(const IQStream& reconstructed, const std::optional<ScaleFactors>& scale,
                  const CompressionProfile& profile, std::size_t input_samples, std::size_t after_cp,
                  SampleRate rate);
// front_end followed by back_end with no quantizer in between.
IQStream frontend_roundtrip(const IQStream& stream, const CompressionProfile& profile);

// Per-stage accounting of one compress call.
struct StageStats {
  std::size_t input_samples = 0;
  std::size_t after_cp = 0;
  std::size_t after_decimation = 0;
  std::size_t vectors = 0;
  std::uint64_t scale_bits = 0;
  std::uint64_t payload_bits = 0;  // quantizer sections only
  std::uint64_t padding_bits = 0;
  std::uint64_t header_bits = 0;
  std::vector<std::uint64_t> section_bits;
  double l_huff = 0.0;        // measured bits per index (VQ, MSVQ) or per high group (UPMGQ)
  double l_huff_table = 0.0;  // under the training PMF
  double l_low = 0.0;         // UPMGQ bits per low-group component
  double cr_cpr = 1.0;
  double cr_dec = 1.0;
  double cr_vq = 1.0;
  double cr_ec = 1.0;
  int q_bs = 0;
  int n_bs = 0;
  int q0 = 15;
  double cr_formula = 0.0;          // with N_BS counted in input-rate samples
  double cr_formula_nominal = 0.0;  // with N_BS taken literally
  double cr_measured = 0.0;         // 2 Q0 M / (scale + payload bits)
};

struct Compressed {
  std::vector<std::uint8_t> bytes;
  StageStats stats;
};

// 1 / (1 / (cr_cpr cr_dec cr_vq cr_ec) + q_bs / (2 q0 n_bs)).
double theorem_cr(double cr_cpr, double cr_dec, double cr_vq, double cr_ec, int q_bs, double n_bs, int q0);
// theorem_cr with the block length expressed in input samples,
// n_bs * cr_cpr * cr_dec, which is what one block of decimated samples spans.
double compression_ratio(const CompressionProfile& profile, const StageStats& stats);

Compressed compress(const IQStream& stream, const CompressionProfile& profile, const QuantizerModel& model,
                    unsigned threads = 0);
IQStream decompress(std::span<const std::uint8_t> bytes, const CompressionProfile& profile,
                    const QuantizerModel& model, unsigned threads = 0);

// Front-end outputs of a corpus, concatenated.
IQStream training_stream(std::span<const IQStream> corpus, const CompressionProfile& profile);
QuantizerModel train_model(const IQStream& prepared, const CompressionProfile& profile, const TrainingParams& params,
                           unsigned threads = 0, TrainingTrace* trace = nullptr);

}  // namespace fvq

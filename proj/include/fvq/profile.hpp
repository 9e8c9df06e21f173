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
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "fvq/frontend.hpp"
#include "fvq/upmgq.hpp"
#include "fvq/vectorizer.hpp"
#include "fvq/vq.hpp"
#include "fvq/waveform.hpp"

namespace fvq {

using Json = nlohmann::json;

struct CpParams {
  int l_sym = 1024;
  int l_cp = 128;
};

// Uplink symbol timing is unknown to the radio, so only the downlink variant
// can carry cyclic-prefix removal.
struct UplinkLink {};
struct DownlinkLink {
  std::optional<CpParams> cp;
};
using LinkProfile = std::variant<UplinkLink, DownlinkLink>;

struct BlockScalingParams {
  int n_bs = 32;
  int q_bs = 8;
  // Amplitude the block maximum is mapped to. Defaults to 2^q - 1 where q is
  // the quantizer's bits per component.
  std::optional<double> target;
};

enum class QuantizerKind : std::uint8_t { raw = 0, vq = 1, msvq = 2, upmgq = 3 };

struct VqParams {
  int l_vq = 2;
  int q_vq = 6;
};

struct MsvqParams {
  int l = 2;
  int q1 = 3;
  int q2 = 3;
};

struct CompressionProfile {
  LinkProfile link = UplinkLink{};
  std::optional<ResamplerSpec> decimation;
  std::optional<BlockScalingParams> block_scaling;
  QuantizerKind quantizer = QuantizerKind::vq;
  VqParams vq;
  MsvqParams msvq;
  UpmgqConfig upmgq;
  bool entropy = true;
  VectorLayout vector_method = VectorLayout::consecutive_same_component;
  std::uint64_t permutation_seed = 0;
  int q0 = 15;
  // Complex RMS, in LSB of the Q0-bit fixed-point input, that a unit-power
  // stream is mapped to.
  double input_rms = 64.0;
  // Utilized band B for frequency-domain EVM.
  int fft_size = 1024;
  int cp_length = 128;
  int used_subcarriers = 600;

  void validate() const;
  bool is_downlink() const { return std::holds_alternative<DownlinkLink>(link); }
  std::optional<CpParams> cp() const;
  // Nominal quantizer bits per component (q_vq, q1 + q2, 1 + q_high + q_low, or q0).
  int quantizer_bits() const;
  int vector_length() const;
  double scale_target() const;
  int q_bs() const { return block_scaling ? block_scaling->q_bs : 0; }
};

struct TrainingParams {
  TrainerKind trainer = TrainerKind::modified;
  int trials = 4;
  LloydStop stop;
  std::uint64_t seed = 1;
  CodebookInit init = CodebookInit::uniform;
};

// One entry of a sweep grid: a label plus dotted-path overrides.
struct SweepPoint {
  std::string label;
  Json set = Json::object();
};

struct ProfileDocument {
  CompressionProfile compression;
  WaveformConfig waveform;
  TrainingParams training;
  std::vector<SweepPoint> sweep;
};

Json to_json(const CompressionProfile& p);
Json to_json(const WaveformConfig& w);
Json to_json(const TrainingParams& t);
Json to_json(const ProfileDocument& d);

CompressionProfile compression_from_json(const Json& j);
WaveformConfig waveform_from_json(const Json& j);
TrainingParams training_from_json(const Json& j);
ProfileDocument document_from_json(const Json& j);

ProfileDocument load_profile(const std::filesystem::path& path);
// Applies "a.b.c=value" to a document; value is parsed as JSON when it is
// valid JSON and taken as a string otherwise.
void apply_override(Json& doc, std::string_view assignment);
void apply_override(Json& doc, std::string_view dotted_path, const Json& value);

// Sorted-key compact serialization and its 64-bit FNV-1a hash.
std::string canonical_json(const CompressionProfile& p);
std::uint64_t profile_digest(const CompressionProfile& p);

std::string_view to_string(QuantizerKind k);
QuantizerKind parse_quantizer(std::string_view s);

}  // namespace fvq

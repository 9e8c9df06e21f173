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
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "fvq/iq_stream.hpp"

namespace fvq {

enum class Modulation { qpsk, qam16, qam64 };
enum class LinkDirection { downlink_ofdm, uplink_scfdm };
// Static propagation channel applied before noise. `multipath` is a fixed
// six-tap delay line with a pedestrian-B-like power-delay profile and one
// seeded complex gain per tap for the whole stream (no time variation).
enum class ChannelModel { awgn, multipath };

inline constexpr double kNoNoise = std::numeric_limits<double>::infinity();

struct WaveformConfig {
  int fft_size = 1024;
  int cp_length = 128;
  int used_subcarriers = 600;
  Modulation modulation = Modulation::qam64;
  double snr_db = kNoNoise;
  int num_symbols = 14;
  std::uint64_t seed = 1;
  LinkDirection link = LinkDirection::uplink_scfdm;
  ChannelModel channel = ChannelModel::awgn;
  double subcarrier_spacing_hz = 15'000.0;

  void validate() const;
  std::size_t stream_length() const {
    return static_cast<std::size_t>(num_symbols) * static_cast<std::size_t>(fft_size + cp_length);
  }
};

// Clean signal and injected noise kept apart so SNR can be measured.
struct WaveformParts {
  IQStream signal;  // unit mean power (unless empty)
  IQStream noise;   // same length; all zeros when snr_db is +inf
};

WaveformParts generate_parts(const WaveformConfig& config);

// signal + noise.
IQStream generate(const WaveformConfig& config);

// Adds circularly-symmetric complex Gaussian noise whose power is the input
// power divided by 10^(snr_db/10). snr_db = +inf returns the input unchanged.
IQStream add_awgn(const IQStream& stream, double snr_db, std::uint64_t seed);

// FFT bin indices of the occupied subcarriers: half above DC, half below,
// DC itself unused. Ordered by bin index.
std::vector<int> used_subcarrier_bins(int fft_size, int used_subcarriers);

// Gray-mapped, unit-average-energy constellation points in natural index order.
std::vector<Complex> constellation(Modulation modulation);

std::string_view to_string(Modulation m);
std::string_view to_string(LinkDirection l);
std::string_view to_string(ChannelModel c);
Modulation parse_modulation(std::string_view s);
LinkDirection parse_link(std::string_view s);
ChannelModel parse_channel(std::string_view s);

}  // namespace fvq

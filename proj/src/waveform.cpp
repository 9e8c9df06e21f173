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

#include "fvq/waveform.hpp"

#include <array>
#include <cmath>

#include "fvq/error.hpp"
#include "fvq/fft.hpp"
#include "fvq/random.hpp"

namespace fvq {
namespace {

// Pedestrian-B-like static profile: delays in ns and relative powers in dB.
constexpr std::array<double, 6> kTapDelayNs{0.0, 200.0, 800.0, 1200.0, 2300.0, 3700.0};
constexpr std::array<double, 6> kTapPowerDb{0.0, -0.9, -4.9, -8.0, -7.8, -23.9};

int bits_per_symbol(Modulation m) {
  switch (m) {
    case Modulation::qpsk: return 2;
    case Modulation::qam16: return 4;
    case Modulation::qam64: return 6;
  }
  return 2;
}

// Gray code to PAM level for one axis with `bits` bits.
double gray_pam_level(unsigned index, int bits) {
  unsigned binary = index;
  for (unsigned shift = 1; shift < static_cast<unsigned>(bits); shift <<= 1) binary ^= binary >> shift;
  const int levels = 1 << bits;
  return static_cast<double>(2 * static_cast<int>(binary) - (levels - 1));
}

std::vector<Complex> apply_multipath(const std::vector<Complex>& x, double sample_rate, Rng& rng) {
  std::array<std::size_t, kTapDelayNs.size()> delay{};
  std::array<Complex, kTapDelayNs.size()> gain{};
  double total = 0.0;
  for (std::size_t t = 0; t < kTapDelayNs.size(); ++t) {
    delay[t] = static_cast<std::size_t>(std::lround(kTapDelayNs[t] * 1e-9 * sample_rate));
    const double p = std::pow(10.0, kTapPowerDb[t] / 10.0);
    gain[t] = Complex(rng.normal(), rng.normal()) * std::sqrt(p / 2.0);
    total += std::norm(gain[t]);
  }
  for (auto& g : gain) g /= std::sqrt(total);
  std::vector<Complex> y(x.size());
  for (std::size_t n = 0; n < x.size(); ++n) {
    Complex acc{};
    for (std::size_t t = 0; t < delay.size(); ++t) {
      if (n >= delay[t]) acc += gain[t] * x[n - delay[t]];
    }
    y[n] = acc;
  }
  return y;
}

}  // namespace

void WaveformConfig::validate() const {
  require(fft_size > 0, "fft_size must be positive");
  require(cp_length >= 0, "cp_length must be non-negative");
  require(cp_length < fft_size, "cp_length must be smaller than fft_size");
  require(used_subcarriers > 0, "used_subcarriers must be positive");
  require(used_subcarriers < fft_size, "used_subcarriers must not exceed fft_size - 1 (DC is unused)");
  require(num_symbols >= 0, "num_symbols must be non-negative");
  require(!std::isnan(snr_db), "snr_db must not be NaN");
  require(subcarrier_spacing_hz > 0.0, "subcarrier spacing must be positive");
}

std::vector<int> used_subcarrier_bins(int fft_size, int used_subcarriers) {
  require(used_subcarriers > 0 && used_subcarriers < fft_size,
          "used_subcarriers must be in [1, fft_size)");
  const int above = (used_subcarriers + 1) / 2;
  const int below = used_subcarriers / 2;
  std::vector<int> bins;
  bins.reserve(static_cast<std::size_t>(used_subcarriers));
  for (int k = 1; k <= above; ++k) bins.push_back(k);
  for (int k = fft_size - below; k < fft_size; ++k) bins.push_back(k);
  return bins;
}

std::vector<Complex> constellation(Modulation modulation) {
  const int bits = bits_per_symbol(modulation);
  const int axis_bits = bits / 2;
  const unsigned axis_levels = 1U << axis_bits;
  std::vector<Complex> points;
  points.reserve(std::size_t{1} << bits);
  double energy = 0.0;
  for (unsigned idx = 0; idx < (1U << bits); ++idx) {
    const unsigned i_bits = idx >> axis_bits;
    const unsigned q_bits = idx & (axis_levels - 1);
    Complex p(gray_pam_level(i_bits, axis_bits), gray_pam_level(q_bits, axis_bits));
    energy += std::norm(p);
    points.push_back(p);
  }
  const double scale = 1.0 / std::sqrt(energy / static_cast<double>(points.size()));
  for (auto& p : points) p *= scale;
  return points;
}

WaveformParts generate_parts(const WaveformConfig& config) {
  config.validate();
  const auto n = static_cast<std::size_t>(config.fft_size);
  const auto cp = static_cast<std::size_t>(config.cp_length);
  const auto used = static_cast<std::size_t>(config.used_subcarriers);
  const double fs = config.subcarrier_spacing_hz * static_cast<double>(config.fft_size);

  WaveformParts parts;
  parts.signal.rate = SampleRate{static_cast<std::uint64_t>(std::llround(fs)), 1};
  parts.signal.provenance = std::string("generated:") + std::string(to_string(config.link));
  parts.noise.rate = parts.signal.rate;
  parts.noise.provenance = "generated:noise";
  if (config.num_symbols == 0) return parts;

  Rng data_rng(mix_seed(config.seed, 0));
  const auto points = constellation(config.modulation);
  const auto bins = used_subcarrier_bins(config.fft_size, config.used_subcarriers);

  std::vector<Complex> data(used), spread(used), grid(n), body(n);
  auto& out = parts.signal.samples;
  out.reserve(config.stream_length());
  for (int sym = 0; sym < config.num_symbols; ++sym) {
    for (auto& d : data) d = points[data_rng.below(points.size())];
    if (config.link == LinkDirection::uplink_scfdm) {
      fft_forward(data, spread);
      const double norm = 1.0 / std::sqrt(static_cast<double>(used));
      for (auto& s : spread) s *= norm;
    } else {
      spread = data;
    }
    std::fill(grid.begin(), grid.end(), Complex{});
    for (std::size_t k = 0; k < used; ++k) grid[static_cast<std::size_t>(bins[k])] = spread[k];
    fft_inverse(grid, body);
    out.insert(out.end(), body.end() - static_cast<std::ptrdiff_t>(cp), body.end());
    out.insert(out.end(), body.begin(), body.end());
  }

  if (config.channel == ChannelModel::multipath) {
    Rng channel_rng(mix_seed(config.seed, 1));
    out = apply_multipath(out, fs, channel_rng);
  }

  const double power = mean_power(out);
  if (power > 0.0) {
    const double scale = 1.0 / std::sqrt(power);
    for (auto& s : out) s *= scale;
  }

  parts.noise.samples.assign(out.size(), Complex{});
  if (std::isfinite(config.snr_db)) {
    Rng noise_rng(mix_seed(config.seed, 2));
    const double sigma = std::sqrt(std::pow(10.0, -config.snr_db / 10.0) / 2.0);
    for (auto& v : parts.noise.samples) v = Complex(noise_rng.normal(), noise_rng.normal()) * sigma;
  }
  return parts;
}

IQStream generate(const WaveformConfig& config) {
  auto parts = generate_parts(config);
  IQStream out = std::move(parts.signal);
  for (std::size_t i = 0; i < out.samples.size(); ++i) out.samples[i] += parts.noise.samples[i];
  return out;
}

IQStream add_awgn(const IQStream& stream, double snr_db, std::uint64_t seed) {
  require(!stream.empty(), "add_awgn: empty stream");
  require(!std::isnan(snr_db), "add_awgn: snr_db is NaN");
  IQStream out = stream;
  if (std::isinf(snr_db) && snr_db > 0) return out;
  const double sigma = std::sqrt(mean_power(stream.samples) * std::pow(10.0, -snr_db / 10.0) / 2.0);
  Rng rng(seed);
  for (auto& s : out.samples) s += Complex(rng.normal(), rng.normal()) * sigma;
  return out;
}

std::string_view to_string(Modulation m) {
  switch (m) {
    case Modulation::qpsk: return "qpsk";
    case Modulation::qam16: return "qam16";
    case Modulation::qam64: return "qam64";
  }
  return "?";
}

std::string_view to_string(LinkDirection l) {
  return l == LinkDirection::downlink_ofdm ? "downlink_ofdm" : "uplink_scfdm";
}

std::string_view to_string(ChannelModel c) { return c == ChannelModel::awgn ? "awgn" : "multipath"; }

Modulation parse_modulation(std::string_view s) {
  if (s == "qpsk") return Modulation::qpsk;
  if (s == "qam16" || s == "16qam") return Modulation::qam16;
  if (s == "qam64" || s == "64qam") return Modulation::qam64;
  throw ContractError("unknown modulation: " + std::string(s));
}

LinkDirection parse_link(std::string_view s) {
  if (s == "downlink_ofdm" || s == "downlink") return LinkDirection::downlink_ofdm;
  if (s == "uplink_scfdm" || s == "uplink") return LinkDirection::uplink_scfdm;
  throw ContractError("unknown link direction: " + std::string(s));
}

ChannelModel parse_channel(std::string_view s) {
  if (s == "awgn") return ChannelModel::awgn;
  if (s == "multipath" || s == "pedb") return ChannelModel::multipath;
  throw ContractError("unknown channel model: " + std::string(s));
}

}  // namespace fvq

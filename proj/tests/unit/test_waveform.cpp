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

#include <gtest/gtest.h>

#include <cmath>

#include "fvq/error.hpp"
#include "fvq/fft.hpp"
#include "fvq/waveform.hpp"
#include "oracles.hpp"

using namespace fvq;

TEST(Waveform, LengthIsSymbolsTimesPeriod) {
  WaveformConfig c;
  c.num_symbols = 14;
  EXPECT_EQ(generate(c).size(), 16128u);
}

TEST(Waveform, ZeroSymbolsGivesEmptyStream) {
  WaveformConfig c;
  c.num_symbols = 0;
  EXPECT_TRUE(generate(c).empty());
}

TEST(Waveform, DeterministicForSeed) {
  WaveformConfig c;
  c.snr_db = 5.0;
  c.num_symbols = 4;
  const auto a = generate(c);
  const auto b = generate(c);
  EXPECT_EQ(a.samples, b.samples);
  c.seed = 2;
  EXPECT_NE(generate(c).samples, a.samples);
}

TEST(Waveform, UnitPowerAndRequestedSnr) {
  for (auto link : {LinkDirection::uplink_scfdm, LinkDirection::downlink_ofdm}) {
    WaveformConfig c;
    c.link = link;
    c.snr_db = 5.0;
    c.num_symbols = 100;
    const auto p = generate_parts(c);
    EXPECT_NEAR(mean_power(p.signal.view()), 1.0, 1e-9);
    const double snr = 10.0 * std::log10(mean_power(p.signal.view()) / mean_power(p.noise.view()));
    EXPECT_NEAR(snr, 5.0, 0.2);
  }
}

TEST(Waveform, CyclicPrefixCopiesSymbolTail) {
  WaveformConfig c;
  c.num_symbols = 3;
  c.link = LinkDirection::downlink_ofdm;
  const auto s = generate(c);
  for (int sym = 0; sym < 3; ++sym) {
    const std::size_t base = static_cast<std::size_t>(sym) * 1152;
    for (std::size_t i = 0; i < 128; ++i) EXPECT_EQ(s.samples[base + i], s.samples[base + 1024 + i]);
  }
}

TEST(Waveform, EnergyConfinedToUsedBins) {
  for (auto link : {LinkDirection::uplink_scfdm, LinkDirection::downlink_ofdm}) {
    WaveformConfig c;
    c.fft_size = 64;
    c.cp_length = 8;
    c.used_subcarriers = 36;
    c.num_symbols = 2;
    c.link = link;
    const auto s = generate(c);
    const auto bins = used_subcarrier_bins(64, 36);
    std::vector<bool> used(64, false);
    for (int b : bins) used[static_cast<std::size_t>(b)] = true;
    const auto spec = oracle::naive_dft(std::span(s.samples).subspan(8, 64));
    for (std::size_t k = 0; k < 64; ++k) {
      if (!used[k]) EXPECT_LT(std::abs(spec[k]), 1e-9) << "bin " << k;
    }
  }
}

TEST(Waveform, UsedBinsSkipDc) {
  const auto b = used_subcarrier_bins(1024, 600);
  ASSERT_EQ(b.size(), 600u);
  EXPECT_EQ(b.front(), 1);
  EXPECT_EQ(b[299], 300);
  EXPECT_EQ(b[300], 724);
  EXPECT_EQ(b.back(), 1023);
}

TEST(Waveform, ConstellationsHaveUnitEnergy) {
  for (auto m : {Modulation::qpsk, Modulation::qam16, Modulation::qam64}) {
    const auto pts = constellation(m);
    double e = 0.0;
    for (const auto& p : pts) e += std::norm(p);
    EXPECT_NEAR(e / static_cast<double>(pts.size()), 1.0, 1e-12);
  }
  EXPECT_EQ(constellation(Modulation::qam64).size(), 64u);
}

TEST(Waveform, AwgnProperties) {
  IQStream s = oracle::gaussian_stream(100000, 3, std::sqrt(0.5));
  const double p0 = mean_power(s.view());
  EXPECT_EQ(add_awgn(s, kNoNoise, 1).samples, s.samples);
  const auto noisy = add_awgn(s, 0.0, 9);
  double pn = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) pn += std::norm(noisy.samples[i] - s.samples[i]);
  EXPECT_NEAR(pn / static_cast<double>(s.size()) / p0, 1.0, 0.02);
  EXPECT_EQ(add_awgn(s, 0.0, 9).samples, noisy.samples);
}

TEST(Waveform, RejectsBadConfig) {
  WaveformConfig c;
  c.used_subcarriers = 1024;
  EXPECT_THROW(c.validate(), ContractError);
  c = {};
  c.cp_length = -1;
  EXPECT_THROW(generate(c), ContractError);
}

TEST(Fft, MatchesNaiveDft) {
  const auto x = oracle::gaussian_stream(48, 5);
  std::vector<Complex> y(48);
  fft_forward(x.samples, y);
  const auto ref = oracle::naive_dft(x.samples);
  for (std::size_t k = 0; k < 48; ++k) EXPECT_LT(std::abs(y[k] - ref[k]), 1e-9);
  std::vector<Complex> back(48);
  fft_inverse(y, back);
  for (std::size_t k = 0; k < 48; ++k) EXPECT_LT(std::abs(back[k] / 48.0 - x.samples[k]), 1e-12);
}

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
#include "fvq/frontend.hpp"
#include "fvq/waveform.hpp"
#include "oracles.hpp"

using namespace fvq;

TEST(CyclicPrefix, RemovalGain) {
  EXPECT_DOUBLE_EQ(cp_removal_gain(1024, 128), 1.125);
  EXPECT_DOUBLE_EQ(cp_removal_gain(1024, 0), 1.0);
}

TEST(CyclicPrefix, RemoveKeepsSymbolBody) {
  const auto s = oracle::gaussian_stream(1152, 1);
  const auto r = remove_cp(s, 1024, 128);
  ASSERT_EQ(r.size(), 1024u);
  for (std::size_t i = 0; i < 1024; ++i) EXPECT_EQ(r.samples[i], s.samples[128 + i]);
  EXPECT_EQ(remove_cp(s, 1152, 0).samples, s.samples);
}

TEST(CyclicPrefix, ReinsertRoundTrip) {
  WaveformConfig c;
  c.num_symbols = 3;
  const auto s = generate(c);
  EXPECT_EQ(reinsert_cp(remove_cp(s, 1024, 128), 1024, 128).samples, s.samples);
  const auto body = oracle::gaussian_stream(1024, 2);
  const auto with = reinsert_cp(body, 1024, 128);
  ASSERT_EQ(with.size(), 1152u);
  for (std::size_t i = 0; i < 128; ++i) EXPECT_EQ(with.samples[i], with.samples[1024 + i]);
  EXPECT_EQ(reinsert_cp(body, 1024, 0).samples, body.samples);
}

TEST(CyclicPrefix, RejectsPartialSymbol) {
  EXPECT_THROW(remove_cp(oracle::gaussian_stream(1000, 1), 1024, 128), ContractError);
}

TEST(Resampler, IdentityWhenKEqualsL) {
  const auto s = oracle::gaussian_stream(500, 3);
  ResamplerSpec spec{4, 4};
  const auto d = resample(s, spec, ResampleDirection::decimate);
  EXPECT_EQ(d.samples, s.samples);
}

TEST(Resampler, MatchesDirectFormOracle) {
  const auto s = oracle::gaussian_stream(300, 4);
  ResamplerSpec spec{5, 8, 9, 60.0};
  const auto h = design_lowpass(5, 8, 9, 60.0);
  const auto y = resample(s, spec, ResampleDirection::decimate);
  const auto ref = oracle::naive_resample(s.samples, 5, 8, h, y.size());
  ASSERT_EQ(y.size(), (300u * 5 + 7) / 8);
  for (std::size_t i = 0; i < y.size(); ++i) EXPECT_LT(std::abs(y.samples[i] - ref[i]), 1e-12);
  const auto up = resample(y, spec, ResampleDirection::interpolate, {.output_length = 300});
  const auto ref_up = oracle::naive_resample(y.samples, 8, 5, design_lowpass(8, 5, 9, 60.0), 300);
  for (std::size_t i = 0; i < 300; ++i) EXPECT_LT(std::abs(up.samples[i] - ref_up[i]), 1e-12);
}

TEST(Resampler, CyclicMatchesPeriodicExtension) {
  const auto s = oracle::gaussian_stream(64, 5);
  ResamplerSpec spec{3, 4, 11, 60.0};
  const auto y = resample(s, spec, ResampleDirection::decimate, {.cyclic_period = 64});
  ASSERT_EQ(y.size(), 48u);
  // Tile three periods and take the middle one.
  IQStream tiled;
  for (int r = 0; r < 3; ++r) tiled.samples.insert(tiled.samples.end(), s.samples.begin(), s.samples.end());
  const auto h = design_lowpass(3, 4, 11, 60.0);
  const auto full = oracle::naive_resample(tiled.samples, 3, 4, h, 144);
  for (std::size_t i = 0; i < 48; ++i) EXPECT_LT(std::abs(y.samples[i] - full[48 + i]), 1e-12);
}

TEST(Resampler, RateIsScaled) {
  IQStream s = oracle::gaussian_stream(160, 6);
  const auto y = resample(s, {5, 8}, ResampleDirection::decimate);
  EXPECT_EQ(y.rate, (SampleRate{9'600'000, 1}));
  EXPECT_DOUBLE_EQ((ResamplerSpec{5, 8}).decimation_gain(), 1.6);
}

TEST(Resampler, RejectsEmptyAndBadSpecs) {
  EXPECT_THROW(resample(IQStream{}, {5, 8}, ResampleDirection::decimate), ContractError);
  EXPECT_THROW(resample(oracle::gaussian_stream(8, 1), {8, 5}, ResampleDirection::decimate), ContractError);
  ResamplerSpec even{5, 8, 10};
  EXPECT_THROW(even.validate(), ContractError);
}

TEST(BlockScaling, ScaleFactorRule) {
  EXPECT_EQ(scale_factor(100.3, 8), 101u);
  EXPECT_EQ(scale_factor(300.0, 8), 255u);
  EXPECT_EQ(scale_factor(0.0, 8), 1u);
  EXPECT_EQ(scale_factor(0.2, 8), 1u);
}

TEST(BlockScaling, OneFactorPerBlock) {
  const auto s = oracle::gaussian_stream(100, 7, 50.0);
  const auto b = block_scale(s, 32, 8, 6);
  EXPECT_EQ(b.scale.factors.size(), 4u);
  for (auto f : b.scale.factors) {
    EXPECT_GE(f, 1u);
    EXPECT_LE(f, 255u);
  }
}

TEST(BlockScaling, SingleUnitBlockDividesByTarget) {
  IQStream s;
  s.samples = {{0.5, -0.25}, {0.1, 0.0}};
  const auto b = block_scale(s, 32, 8, 6);
  ASSERT_EQ(b.scale.factors, std::vector<std::uint32_t>{1u});
  EXPECT_DOUBLE_EQ(b.stream.samples[0].real(), 0.5 * 63.0);
  const auto u = block_unscale(b.stream, b.scale, 6);
  EXPECT_NEAR(u.samples[0].real(), 0.5, 1e-15);
}

TEST(BlockScaling, RoundTripRelativeError) {
  const auto s = oracle::gaussian_stream(10000, 8, 80.0);
  const auto b = block_scale(s, 32, 8, 6);
  const auto u = block_unscale(b.stream, b.scale, 6);
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_LE(std::abs(u.samples[i] - s.samples[i]), 1e-6 * std::abs(s.samples[i]) + 1e-300);
  }
}

TEST(BlockScaling, SaturatedFactorsGiveUniformRescale) {
  const auto s = oracle::gaussian_stream(64, 9, 1000.0);
  const auto b = block_scale_to(s, 16, 8, 10.0);
  for (auto f : b.scale.factors) ASSERT_EQ(f, 255u);
  for (std::size_t i = 0; i < s.size(); ++i) {
    EXPECT_NEAR(std::abs(b.stream.samples[i] - s.samples[i] * (10.0 / 255.0)), 0.0, 1e-9);
  }
}

TEST(BlockScaling, RejectsFactorCountMismatch) {
  const auto s = oracle::gaussian_stream(64, 9);
  auto b = block_scale(s, 32, 8, 6);
  b.scale.factors.pop_back();
  EXPECT_THROW(block_unscale(b.stream, b.scale, 6), ContractError);
}

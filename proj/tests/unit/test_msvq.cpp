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

#include "fvq/error.hpp"
#include "fvq/msvq.hpp"
#include "oracles.hpp"

using namespace fvq;

namespace {

VectorBatch corpus(std::size_t n, std::uint64_t seed) {
  return vectorize(oracle::gaussian_stream(n, seed, 20.0), VectorLayout::consecutive_same_component, 2);
}

double sq(std::span<const double> v, std::span<const float> c) { return squared_distance(v, c); }

}  // namespace

TEST(MsvqComplexity, TableValues) {
  EXPECT_EQ(msvq_complexity(3, 3, 2), (Complexity{128, 4160}));
  EXPECT_EQ(msvq_complexity(2, 3, 2), (Complexity{80, 1040}));
  EXPECT_EQ(msvq_complexity(3, 4, 2), (Complexity{320, 16448}));
  EXPECT_EQ(msvq_complexity(3, 0, 2), (Complexity{65, 128}));
  EXPECT_EQ(msvq_stage1_bits(6), 3);
}

TEST(Msvq, GeometryAndCounters) {
  const auto batch = corpus(60000, 1);
  MsvqTrainReport report;
  const auto cb = train_msvq(batch, 3, 3, TrainerKind::modified, 1, {30, 1e-4}, 2, &report);
  EXPECT_EQ(cb.stage1.size(), 64u);
  ASSERT_EQ(cb.stage2.size(), 64u);
  for (const auto& s : cb.stage2) EXPECT_EQ(s.size(), 64u);
  EXPECT_EQ(cb.stored_codewords(), 4160u);
  SearchStats stats;
  const auto idx = quantize_msvq_batch(cb, batch, SearchMode::exhaustive, &stats);
  EXPECT_DOUBLE_EQ(stats.per_query(), 128.0);
  const auto fast = quantize_msvq_batch(cb, batch, SearchMode::accelerated);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    ASSERT_EQ(idx[i].i1, fast[i].i1);
    ASSERT_EQ(idx[i].i2, fast[i].i2);
  }
}

TEST(Msvq, RefinementNeverWorseThanCellSearchOracle) {
  const auto batch = corpus(30000, 3);
  const auto cb = train_msvq(batch, 2, 2, TrainerKind::classical, 1, {30, 1e-4}, 4);
  for (std::size_t i = 0; i < 2000; ++i) {
    const auto idx = quantize_msvq(cb, batch[i]);
    ASSERT_EQ(idx.i1, oracle::brute_force_nearest(cb.stage1, batch[i]));
    ASSERT_EQ(idx.i2, oracle::brute_force_nearest(cb.stage2[idx.i1], batch[i]));
    // Stage 2 holds the cell centroid's neighbourhood; its best codeword is
    // at least as good as the stage-1 codeword on trained data on average.
  }
  double d1 = 0.0;
  double d2 = 0.0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto idx = quantize_msvq(cb, batch[i]);
    d1 += sq(batch[i], cb.stage1[idx.i1]);
    d2 += sq(batch[i], dequantize_msvq(cb, idx));
  }
  EXPECT_LE(d2, d1);
}

TEST(Msvq, ExactReconstructionOfStageTwoCodeword) {
  const auto batch = corpus(20000, 5);
  const auto cb = train_msvq(batch, 2, 2, TrainerKind::classical, 1, {20, 1e-4}, 6);
  int hits = 0;
  for (std::uint32_t c = 0; c < cb.stage1.size(); ++c) {
    for (std::uint32_t k = 0; k < cb.stage2[c].size(); ++k) {
      const auto w = cb.stage2[c][k];
      const std::vector<double> v(w.begin(), w.end());
      if (quantize_msvq(cb, v).i1 != c) continue;  // not reachable through its own cell
      const auto idx = quantize_msvq(cb, v);
      const auto r = dequantize_msvq(cb, idx);
      EXPECT_EQ(r[0], w[0]);
      EXPECT_EQ(r[1], w[1]);
      ++hits;
    }
  }
  EXPECT_GT(hits, 0);
}

TEST(Msvq, DegenerateStageTwoIsPlainVq) {
  const auto batch = corpus(20000, 7);
  const auto cb = train_msvq(batch, 3, 0, TrainerKind::classical, 1, {20, 1e-4}, 8);
  const auto plain = train_classical(batch, 3, 1, {20, 1e-4}, mix_seed(8, 0));
  EXPECT_EQ(cb.stage1.codewords, plain.codewords);
  for (std::size_t i = 0; i < 500; ++i) {
    const auto idx = quantize_msvq(cb, batch[i]);
    EXPECT_EQ(idx.i2, 0u);
    EXPECT_EQ(idx.i1, oracle::brute_force_nearest(plain, batch[i]));
  }
  // The single refinement codeword is the centroid of its stage-1 cell.
  for (const auto& s2 : cb.stage2) EXPECT_EQ(s2.size(), 1u);
}

TEST(Msvq, UnderpopulatedCellsAreRepaired) {
  const auto batch = corpus(300, 9);
  MsvqTrainReport report;
  const auto cb = train_msvq(batch, 2, 3, TrainerKind::classical, 1, {20, 1e-4}, 1, &report);
  EXPECT_GT(report.underpopulated_cells, 0);
  EXPECT_NO_THROW(cb.validate());
}

TEST(Msvq, JointIndexRoundTripAndContainer) {
  const auto batch = corpus(20000, 11);
  const auto model = make_msvq_model(train_msvq(batch, 2, 2, TrainerKind::modified, 2, {20, 1e-4}, 3));
  for (std::uint32_t j = 0; j < 256; ++j) EXPECT_EQ(msvq_joint(model.codebook, msvq_split(model.codebook, j)), j);
  const auto bytes = encode_msvq_model(model);
  const auto back = decode_msvq_model(bytes);
  EXPECT_EQ(encode_msvq_model(back), bytes);
  auto bad = bytes;
  bad.pop_back();
  EXPECT_THROW(decode_msvq_model(bad), FormatError);
}

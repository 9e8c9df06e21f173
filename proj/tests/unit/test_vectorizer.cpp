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

#include <set>

#include "fvq/error.hpp"
#include "fvq/random.hpp"
#include "fvq/vectorizer.hpp"
#include "oracles.hpp"

using namespace fvq;

namespace {

IQStream two_samples() {
  IQStream s;
  s.samples = {{1.0, 2.0}, {3.0, 4.0}};
  return s;
}

}  // namespace

TEST(Vectorizer, Method1Example) {
  const auto b = vectorize(two_samples(), VectorLayout::consecutive_same_component, 2);
  EXPECT_EQ(b.values, (std::vector<double>{1, 3, 2, 4}));
}

TEST(Vectorizer, Method2Example) {
  const auto b = vectorize(two_samples(), VectorLayout::iq_interleaved, 2);
  EXPECT_EQ(b.values, (std::vector<double>{1, 2, 3, 4}));
}

TEST(Vectorizer, SingletonVectorsHoldComponents) {
  const auto s = oracle::gaussian_stream(17, 1);
  for (auto m : {VectorLayout::consecutive_same_component, VectorLayout::iq_interleaved,
                 VectorLayout::random_permutation}) {
    const auto b = vectorize(s, m, 1, 5);
    ASSERT_EQ(b.size(), 34u);
    std::multiset<double> got(b.values.begin(), b.values.end());
    std::multiset<double> want;
    for (const auto& x : s.samples) {
      want.insert(x.real());
      want.insert(x.imag());
    }
    EXPECT_EQ(got, want);
  }
}

TEST(Vectorizer, EmptyRoundTrip) {
  const auto b = vectorize(IQStream{}, VectorLayout::iq_interleaved, 3);
  EXPECT_TRUE(b.empty());
  EXPECT_TRUE(devectorize(b).empty());
}

TEST(Vectorizer, RoundTripAllMethodsRandomSizes) {
  Rng rng(11);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + rng.below(500);
    const int l = 1 + static_cast<int>(rng.below(5));
    const auto s = oracle::gaussian_stream(n, 100 + static_cast<std::uint64_t>(trial));
    for (auto m : {VectorLayout::consecutive_same_component, VectorLayout::iq_interleaved,
                   VectorLayout::random_permutation}) {
      const auto b = vectorize(s, m, l, 77);
      EXPECT_EQ(b.values.size() % static_cast<std::size_t>(l), 0u);
      EXPECT_EQ(devectorize(b).samples, s.samples) << "n=" << n << " l=" << l;
    }
  }
}

TEST(Vectorizer, PermutationSeedsDiffer) {
  const auto s = oracle::gaussian_stream(200, 12);
  const auto a = vectorize(s, VectorLayout::random_permutation, 2, 1);
  const auto b = vectorize(s, VectorLayout::random_permutation, 2, 2);
  EXPECT_NE(a.values, b.values);
  EXPECT_EQ(devectorize(a).samples, s.samples);
  EXPECT_EQ(devectorize(b).samples, s.samples);
}

TEST(Vectorizer, PermutationIsBijective) {
  const auto p = component_permutation(1000, 3);
  std::set<std::size_t> seen(p.begin(), p.end());
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_EQ(*seen.rbegin(), 999u);
}

TEST(Vectorizer, OrthantEntropySymmetricSource) {
  const auto s = oracle::gaussian_stream(100000, 13);
  const auto b = vectorize(s, VectorLayout::iq_interleaved, 2);
  EXPECT_NEAR(orthant_entropy(b), 2.0, 0.05);
}

TEST(Vectorizer, OrthantEntropyPositiveOrthant) {
  IQStream s;
  for (int i = 0; i < 100; ++i) s.samples.emplace_back(1.0 + i, 2.0 + i);
  EXPECT_DOUBLE_EQ(orthant_entropy(vectorize(s, VectorLayout::iq_interleaved, 2)), 0.0);
}

TEST(Vectorizer, RejectsBadLength) {
  EXPECT_THROW(vectorize(two_samples(), VectorLayout::iq_interleaved, 0), ContractError);
}

TEST(Vectorizer, LayoutNames) {
  for (auto m : {VectorLayout::consecutive_same_component, VectorLayout::iq_interleaved,
                 VectorLayout::random_permutation}) {
    EXPECT_EQ(parse_layout(to_string(m)), m);
  }
}

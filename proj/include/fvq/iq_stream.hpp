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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace fvq {

using Complex = std::complex<double>;

// Exact rational sample rate in Hz.
struct SampleRate {
  std::uint64_t num = 15'360'000;
  std::uint64_t den = 1;

  double hz() const { return static_cast<double>(num) / static_cast<double>(den); }

  SampleRate scaled(std::uint64_t mul, std::uint64_t div) const {
    std::uint64_t n = num * mul;
    std::uint64_t d = den * div;
    const std::uint64_t g = std::gcd(n, d);
    return {n / g, d / g};
  }

  friend bool operator==(const SampleRate&, const SampleRate&) = default;
};

// A run of complex baseband samples plus where they came from.
struct IQStream {
  std::vector<Complex> samples;
  SampleRate rate;
  std::string provenance;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  std::span<const Complex> view() const { return samples; }
};

double mean_power(std::span<const Complex> samples);

}  // namespace fvq

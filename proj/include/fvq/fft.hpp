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

#include <span>

#include "fvq/iq_stream.hpp"

namespace fvq {

// Unnormalized forward DFT: X[k] = sum_n x[n] exp(-2 pi i k n / N).
void fft_forward(std::span<const Complex> in, std::span<Complex> out);

// Unnormalized inverse DFT: x[n] = sum_k X[k] exp(+2 pi i k n / N).
void fft_inverse(std::span<const Complex> in, std::span<Complex> out);

}  // namespace fvq

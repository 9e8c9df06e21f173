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
#include <optional>
#include <vector>

#include "fvq/iq_stream.hpp"

namespace fvq {

// ---------------------------------------------------------------------------
// Cyclic prefix

// Drops the first l_cp samples of every (l_sym + l_cp)-sample symbol.
IQStream remove_cp(const IQStream& stream, int l_sym, int l_cp);

// Prepends the last l_cp samples of every l_sym-sample symbol.
IQStream reinsert_cp(const IQStream& stream, int l_sym, int l_cp);

// (l_sym + l_cp) / l_sym.
double cp_removal_gain(int l_sym, int l_cp);

// ---------------------------------------------------------------------------
// Rational resampling

struct ResamplerSpec {
  int up = 1;     // K
  int down = 1;   // L
  // Sinc lobes spanned by the prototype filter. The prototype has
  // (filter_taps - 1) * max(K, L) + 1 taps at the upsampled rate, which keeps
  // the transition width a fixed fraction of the lower of the two rates.
  int filter_taps = 127;
  double stopband_atten_db = 60.0;

  // Divides out gcd(K, L).
  ResamplerSpec reduced() const;
  // L / K.
  double decimation_gain() const { return static_cast<double>(down) / static_cast<double>(up); }
  void validate() const;
};

enum class ResampleDirection { decimate, interpolate };

struct ResampleOptions {
  // Output sample count; defaults to ceil(M * rate ratio).
  std::optional<std::size_t> output_length;
  // When non-zero the stream is treated as back-to-back periodic blocks of
  // this many input samples, each filtered circularly. Used for CP-free OFDM
  // symbols, whose bodies are one period of a periodic signal.
  std::size_t cyclic_period = 0;
};

// Decimate: upsample by K, low-pass at the output Nyquist rate, keep every
// L-th sample. Interpolate: the same with K and L swapped. Filter group delay
// is compensated so output sample m sits at input time m * L / K (decimate).
IQStream resample(const IQStream& stream, const ResamplerSpec& spec, ResampleDirection direction,
                  const ResampleOptions& options = {});

// Windowed-sinc prototype (Kaiser) for an up-by-`up`, down-by-`down` stage,
// with passband gain `up`.
std::vector<double> design_lowpass(int up, int down, int lobes, double stopband_atten_db);
double kaiser_beta(double stopband_atten_db);

// ---------------------------------------------------------------------------
// Block scaling

struct ScaleFactors {
  int n_bs = 32;
  int q_bs = 8;
  std::vector<std::uint32_t> factors;  // S(b), one per block, 1 <= S(b) < 2^q_bs
};

struct BlockScaled {
  IQStream stream;
  ScaleFactors scale;
};

// Per block b: A(b) = max |Re|, |Im|; S(b) = clamp(ceil(A(b)), 1, 2^q_bs - 1);
// samples multiplied by target / S(b). target = 2^q_vq - 1 in the overload
// taking q_vq. The last block may be partial.
BlockScaled block_scale(const IQStream& stream, int n_bs, int q_bs, int q_vq);
BlockScaled block_scale_to(const IQStream& stream, int n_bs, int q_bs, double target);

IQStream block_unscale(const IQStream& stream, const ScaleFactors& scale, int q_vq);
IQStream block_unscale_from(const IQStream& stream, const ScaleFactors& scale, double target);

std::uint32_t scale_factor(double block_max, int q_bs);

}  // namespace fvq

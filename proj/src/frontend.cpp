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

#include "fvq/frontend.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "fvq/error.hpp"

namespace fvq {

IQStream remove_cp(const IQStream& stream, int l_sym, int l_cp) {
  require(l_sym > 0 && l_cp >= 0, "remove_cp: l_sym must be positive and l_cp non-negative");
  const auto period = static_cast<std::size_t>(l_sym + l_cp);
  require(stream.size() % period == 0,
          "remove_cp: stream length " + std::to_string(stream.size()) +
              " is not a multiple of l_sym + l_cp = " + std::to_string(period));
  IQStream out;
  out.rate = stream.rate;
  out.provenance = stream.provenance;
  out.samples.reserve(stream.size() / period * static_cast<std::size_t>(l_sym));
  for (std::size_t start = 0; start < stream.size(); start += period) {
    auto first = stream.samples.begin() + static_cast<std::ptrdiff_t>(start + static_cast<std::size_t>(l_cp));
    out.samples.insert(out.samples.end(), first, first + l_sym);
  }
  return out;
}

IQStream reinsert_cp(const IQStream& stream, int l_sym, int l_cp) {
  require(l_sym > 0 && l_cp >= 0 && l_cp <= l_sym, "reinsert_cp: need 0 <= l_cp <= l_sym");
  const auto sym = static_cast<std::size_t>(l_sym);
  require(stream.size() % sym == 0, "reinsert_cp: stream length " + std::to_string(stream.size()) +
                                        " is not a multiple of l_sym = " + std::to_string(sym));
  IQStream out;
  out.rate = stream.rate;
  out.provenance = stream.provenance;
  out.samples.reserve(stream.size() / sym * (sym + static_cast<std::size_t>(l_cp)));
  for (std::size_t start = 0; start < stream.size(); start += sym) {
    auto body = stream.samples.begin() + static_cast<std::ptrdiff_t>(start);
    out.samples.insert(out.samples.end(), body + (l_sym - l_cp), body + l_sym);
    out.samples.insert(out.samples.end(), body, body + l_sym);
  }
  return out;
}

double cp_removal_gain(int l_sym, int l_cp) {
  require(l_sym > 0 && l_cp >= 0, "cp_removal_gain: invalid lengths");
  return static_cast<double>(l_sym + l_cp) / static_cast<double>(l_sym);
}

// ---------------------------------------------------------------------------

ResamplerSpec ResamplerSpec::reduced() const {
  validate();
  ResamplerSpec r = *this;
  const int g = std::gcd(up, down);
  r.up /= g;
  r.down /= g;
  return r;
}

void ResamplerSpec::validate() const {
  require(up > 0 && down > 0, "resampler factors must be positive");
  require(filter_taps >= 1 && filter_taps % 2 == 1, "filter_taps must be an odd positive integer");
  require(stopband_atten_db > 0.0, "stopband attenuation must be positive");
}

double kaiser_beta(double a) {
  if (a > 50.0) return 0.1102 * (a - 8.7);
  if (a >= 21.0) return 0.5842 * std::pow(a - 21.0, 0.4) + 0.07886 * (a - 21.0);
  return 0.0;
}

std::vector<double> design_lowpass(int up, int down, int lobes, double stopband_atten_db) {
  const int rate = std::max(up, down);
  const std::size_t n = static_cast<std::size_t>(lobes - 1) * static_cast<std::size_t>(rate) + 1;
  const double fc = 0.5 / rate;  // cycles per sample at the upsampled rate
  const double beta = kaiser_beta(stopband_atten_db);
  const double i0_beta = std::cyl_bessel_i(0.0, beta);
  const double centre = static_cast<double>(n - 1) / 2.0;
  std::vector<double> h(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) - centre;
    const double x = 2.0 * fc * t;
    const double sinc = t == 0.0 ? 1.0 : std::sin(std::numbers::pi * x) / (std::numbers::pi * x);
    const double r = centre > 0.0 ? t / centre : 0.0;
    const double w = std::cyl_bessel_i(0.0, beta * std::sqrt(std::max(0.0, 1.0 - r * r))) / i0_beta;
    h[i] = 2.0 * fc * sinc * w * up;
  }
  return h;
}

IQStream resample(const IQStream& stream, const ResamplerSpec& spec_in, ResampleDirection direction,
                  const ResampleOptions& options) {
  require(!stream.empty(), "resample: empty stream");
  const ResamplerSpec spec = spec_in.reduced();
  if (direction == ResampleDirection::decimate) {
    require(spec.up <= spec.down, "resample: decimation requires K <= L");
  }
  const int up = direction == ResampleDirection::decimate ? spec.up : spec.down;
  const int down = direction == ResampleDirection::decimate ? spec.down : spec.up;
  const auto u = static_cast<std::size_t>(up);
  const auto d = static_cast<std::size_t>(down);
  const std::size_t m_in = stream.size();

  IQStream out;
  out.rate = stream.rate.scaled(u, d);
  out.provenance = stream.provenance;

  if (options.cyclic_period != 0) {
    const std::size_t period = options.cyclic_period;
    require(m_in % period == 0, "resample: stream length is not a multiple of the cyclic period");
    require(period * u % d == 0, "resample: cyclic period does not map to an integer output period");
    const std::size_t out_period = period * u / d;
    const std::size_t blocks = m_in / period;
    if (options.output_length) {
      require(*options.output_length == blocks * out_period, "resample: cyclic output length mismatch");
    }
    out.samples.resize(blocks * out_period);
    if (up == down) {
      out.samples = stream.samples;
      return out;
    }
    const auto h = design_lowpass(up, down, spec.filter_taps, spec.stopband_atten_db);
    const auto half = static_cast<std::int64_t>((h.size() - 1) / 2);
    const auto p = static_cast<std::int64_t>(period);
    for (std::size_t b = 0; b < blocks; ++b) {
      const Complex* x = stream.samples.data() + b * period;
      Complex* y = out.samples.data() + b * out_period;
      for (std::size_t m = 0; m < out_period; ++m) {
        // Upsampled-time index of this output, then taps j with (t - j + half) % up == 0.
        const std::int64_t t = static_cast<std::int64_t>(m * d);
        const std::int64_t lo = t + half - static_cast<std::int64_t>(h.size()) + 1;
        const std::int64_t hi = t + half;
        std::int64_t n0 = lo >= 0 ? (lo + up - 1) / up : -((-lo) / up);
        const std::int64_t n1 = hi >= 0 ? hi / up : -((-hi + up - 1) / up);
        Complex acc{};
        for (std::int64_t n = n0; n <= n1; ++n) {
          const auto tap = static_cast<std::size_t>(t - n * up + half);
          std::int64_t idx = n % p;
          if (idx < 0) idx += p;
          acc += x[idx] * h[tap];
        }
        y[m] = acc;
      }
    }
    return out;
  }

  const std::size_t m_out = options.output_length.value_or((m_in * u + d - 1) / d);
  if (up == down) {
    out.samples = stream.samples;
    out.samples.resize(m_out);
    return out;
  }
  const auto h = design_lowpass(up, down, spec.filter_taps, spec.stopband_atten_db);
  const auto half = static_cast<std::int64_t>((h.size() - 1) / 2);
  const auto len = static_cast<std::int64_t>(m_in);
  out.samples.resize(m_out);
  for (std::size_t m = 0; m < m_out; ++m) {
    const std::int64_t t = static_cast<std::int64_t>(m * d);
    const std::int64_t lo = t + half - static_cast<std::int64_t>(h.size()) + 1;
    const std::int64_t hi = t + half;
    std::int64_t n0 = lo >= 0 ? (lo + up - 1) / up : 0;
    std::int64_t n1 = std::min(hi / up, len - 1);
    n0 = std::max<std::int64_t>(n0, 0);
    Complex acc{};
    for (std::int64_t n = n0; n <= n1; ++n) {
      acc += stream.samples[static_cast<std::size_t>(n)] * h[static_cast<std::size_t>(t - n * up + half)];
    }
    out.samples[m] = acc;
  }
  return out;
}

// ---------------------------------------------------------------------------

std::uint32_t scale_factor(double block_max, int q_bs) {
  const double cap = std::ldexp(1.0, q_bs) - 1.0;
  const double s = std::ceil(block_max);
  if (!(s >= 1.0)) return 1;  // all-zero block (also catches NaN)
  return static_cast<std::uint32_t>(std::min(s, cap));
}

BlockScaled block_scale_to(const IQStream& stream, int n_bs, int q_bs, double target) {
  require(n_bs >= 1, "block_scale: n_bs must be positive");
  require(q_bs >= 1 && q_bs <= 32, "block_scale: q_bs must be in [1, 32]");
  require(target > 0.0, "block_scale: target must be positive");
  BlockScaled out;
  out.stream.rate = stream.rate;
  out.stream.provenance = stream.provenance;
  out.stream.samples.resize(stream.size());
  out.scale.n_bs = n_bs;
  out.scale.q_bs = q_bs;
  const auto block = static_cast<std::size_t>(n_bs);
  const std::size_t blocks = (stream.size() + block - 1) / block;
  out.scale.factors.resize(blocks);
  for (std::size_t b = 0; b < blocks; ++b) {
    const std::size_t first = b * block;
    const std::size_t last = std::min(first + block, stream.size());
    double a = 0.0;
    for (std::size_t i = first; i < last; ++i) {
      a = std::max({a, std::abs(stream.samples[i].real()), std::abs(stream.samples[i].imag())});
    }
    const std::uint32_t s = scale_factor(a, q_bs);
    out.scale.factors[b] = s;
    const double g = target / static_cast<double>(s);
    for (std::size_t i = first; i < last; ++i) out.stream.samples[i] = stream.samples[i] * g;
  }
  return out;
}

BlockScaled block_scale(const IQStream& stream, int n_bs, int q_bs, int q_vq) {
  require(q_vq >= 1 && q_vq < 53, "block_scale: q_vq must be in [1, 52]");
  return block_scale_to(stream, n_bs, q_bs, std::ldexp(1.0, q_vq) - 1.0);
}

IQStream block_unscale_from(const IQStream& stream, const ScaleFactors& scale, double target) {
  require(scale.n_bs >= 1, "block_unscale: n_bs must be positive");
  require(target > 0.0, "block_unscale: target must be positive");
  const auto block = static_cast<std::size_t>(scale.n_bs);
  const std::size_t blocks = (stream.size() + block - 1) / block;
  require(blocks == scale.factors.size(),
          "block_unscale: " + std::to_string(scale.factors.size()) + " factors for " +
              std::to_string(blocks) + " blocks");
  IQStream out = stream;
  for (std::size_t b = 0; b < blocks; ++b) {
    const double g = static_cast<double>(scale.factors[b]) / target;
    const std::size_t last = std::min((b + 1) * block, stream.size());
    for (std::size_t i = b * block; i < last; ++i) out.samples[i] *= g;
  }
  return out;
}

IQStream block_unscale(const IQStream& stream, const ScaleFactors& scale, int q_vq) {
  require(q_vq >= 1 && q_vq < 53, "block_unscale: q_vq must be in [1, 52]");
  return block_unscale_from(stream, scale, std::ldexp(1.0, q_vq) - 1.0);
}

}  // namespace fvq

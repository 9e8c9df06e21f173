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

#include "fvq/upmgq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fvq/error.hpp"
#include "fvq/parallel.hpp"
#include "fvq/vectorizer.hpp"
#include "fvq/vq_io.hpp"

namespace fvq {
namespace {

constexpr std::string_view kMagic{"UPMG\0\0\0\0", 8};
constexpr std::uint8_t kVersion = 1;

VectorBatch component_groups(const IQStream& stream, int l) {
  return vectorize(stream, VectorLayout::consecutive_same_component, l);
}

}  // namespace

void UpmgqConfig::validate() const {
  require(theta >= -30 && theta <= 30, "upmgq: theta out of range");
  require(q_high >= 1 && l_upmgq >= 1, "upmgq: q_high and l_upmgq must be positive");
  require(q_low >= 0 && q_low <= 24, "upmgq: q_low must be in [0, 24]");
  require(static_cast<long>(q_high) * l_upmgq <= kMaxCodebookBits, "upmgq: high-group codebook too large");
  require(q0 >= 1, "upmgq: q0 must be positive");
}

Expansion expand(double sample, int theta) {
  require(std::isfinite(sample), "expand: sample must be finite");
  Expansion e;
  e.sign = std::signbit(sample) && sample != 0.0 ? -1 : 1;
  const double mag = std::fabs(sample);
  const double unit = std::ldexp(1.0, theta);
  e.high = unit * std::floor(std::ldexp(mag, -theta));
  e.low = mag - e.high;
  return e;
}

LevelStatistics level_statistics(const IQStream& stream, int min_level, int max_level) {
  require(!stream.empty(), "level_statistics: empty stream");
  require(min_level <= max_level, "level_statistics: empty level range");
  LevelStatistics st;
  st.min_level = min_level;
  st.max_level = max_level;
  st.p_one.assign(static_cast<std::size_t>(max_level - min_level + 1), 0.0);
  std::vector<std::uint64_t> ones(st.p_one.size(), 0);
  std::uint64_t negative = 0;
  auto visit = [&](double x) {
    if (x < 0.0) ++negative;
    const double mag = std::fabs(x);
    for (int k = min_level; k <= max_level; ++k) {
      const double v = std::floor(std::ldexp(mag, -k));
      if (std::fmod(v, 2.0) == 1.0) ++ones[static_cast<std::size_t>(k - min_level)];
    }
  };
  for (const auto& s : stream.samples) {
    visit(s.real());
    visit(s.imag());
  }
  st.components = 2 * stream.size();
  const auto n = static_cast<double>(st.components);
  for (std::size_t k = 0; k < ones.size(); ++k) st.p_one[k] = static_cast<double>(ones[k]) / n;
  st.sign_p = static_cast<double>(negative) / n;
  return st;
}

std::vector<double> low_reconstruction_points(int theta, int q_low) {
  const auto n = std::size_t{1} << q_low;
  const double step = std::ldexp(1.0, theta - q_low);
  std::vector<double> pts(n);
  for (std::size_t k = 0; k < n; ++k) pts[k] = (static_cast<double>(k) + 0.5) * step;
  return pts;
}

std::uint32_t quantize_low(double low, int theta, int q_low) {
  const auto top = (std::uint32_t{1} << q_low) - 1;
  const double step = std::ldexp(1.0, theta - q_low);
  const double pos = std::floor(low / step);
  auto c = static_cast<std::uint32_t>(std::clamp(pos, 0.0, static_cast<double>(top)));
  // Exact cell boundaries are equidistant from two points; keep the lower.
  if (c > 0) {
    const double here = std::fabs(low - (c + 0.5) * step);
    const double below = std::fabs(low - (c - 0.5) * step);
    if (below <= here) --c;
  }
  return c;
}

void UpmgqCodebook::validate() const {
  config.validate();
  high_vq.validate();
  require(high_vq.l_vq == config.l_upmgq && high_vq.q_vq == config.q_high, "upmgq: high codebook geometry mismatch");
  for (float c : high_vq.codewords) {
    require(c >= 0.0f && std::floor(c) == c, "upmgq: high codewords must be non-negative integers");
  }
  require(low_points.size() == (std::size_t{1} << config.q_low), "upmgq: low quantizer size mismatch");
  const double unit = std::ldexp(1.0, config.theta);
  for (double p : low_points) require(p > 0.0 && p < unit, "upmgq: low points must lie inside (0, 2^theta)");
  require(huffman_high.alphabet_size == high_vq.size(), "upmgq: high Huffman alphabet mismatch");
  require(config.low_entropy == huffman_low.has_value(), "upmgq: low Huffman table presence mismatch");
  if (huffman_low) require(huffman_low->alphabet_size == low_points.size(), "upmgq: low Huffman alphabet mismatch");
}

UpmgqCodebook train_upmgq(const IQStream& stream, const UpmgqConfig& config, TrainerKind trainer, int trials,
                          const LloydStop& stop, std::uint64_t seed, unsigned threads, CodebookInit init) {
  config.validate();
  require(!stream.empty(), "train_upmgq: empty stream");
  const VectorBatch groups = component_groups(stream, config.l_upmgq);
  VectorBatch highs;
  highs.l_vq = config.l_upmgq;
  highs.values.resize(groups.values.size());
  std::vector<std::uint32_t> low_codes(groups.values.size());
  for (std::size_t i = 0; i < groups.values.size(); ++i) {
    const auto e = expand(groups.values[i], config.theta);
    highs.values[i] = std::ldexp(e.high, -config.theta);
    low_codes[i] = quantize_low(e.low, config.theta, config.q_low);
  }
  UpmgqCodebook cb;
  cb.config = config;
  cb.high_vq = train_codebook(trainer, highs, config.q_high, trials, stop, seed, nullptr, threads, init);
  for (auto& c : cb.high_vq.codewords) c = std::max(0.0f, std::round(c));
  const auto idx = quantize_batch(cb.high_vq, highs, SearchMode::accelerated, nullptr, threads);
  cb.high_vq.usage_counts.assign(cb.high_vq.size(), 0);
  for (auto i : idx) ++cb.high_vq.usage_counts[i];
  cb.huffman_high = huffman_from_usage(cb.high_vq);
  cb.low_points = low_reconstruction_points(config.theta, config.q_low);
  if (config.low_entropy) cb.huffman_low = build_huffman(estimate_pmf(low_codes, 1U << config.q_low));
  return cb;
}

UpmgqSymbols quantize_upmgq(const UpmgqCodebook& cb, const IQStream& stream, SearchMode mode, SearchStats* stats,
                            unsigned threads) {
  const auto& cfg = cb.config;
  const VectorBatch groups = component_groups(stream, cfg.l_upmgq);
  const std::size_t n = groups.values.size();
  UpmgqSymbols out;
  out.sample_count = stream.size();
  out.negative.resize(n);
  out.low.resize(n);
  VectorBatch highs;
  highs.l_vq = cfg.l_upmgq;
  highs.values.resize(n);
  std::vector<double> lows(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto e = expand(groups.values[i], cfg.theta);
    out.negative[i] = e.sign < 0 ? 1 : 0;
    highs.values[i] = std::ldexp(e.high, -cfg.theta);
    lows[i] = e.low;
  }
  if (mode == SearchMode::exhaustive) {
    out.high.resize(highs.size());
    const auto l = static_cast<std::size_t>(cfg.l_upmgq);
    std::vector<double> best(l);
    for (std::size_t g = 0; g < highs.size(); ++g) {
      out.high[g] = static_cast<std::uint32_t>(nearest_codeword(cb.high_vq, highs[g], stats));
      // One pass over the low points serves every component of the group.
      std::fill(best.begin(), best.end(), std::numeric_limits<double>::infinity());
      for (std::size_t k = 0; k < cb.low_points.size(); ++k) {
        for (std::size_t j = 0; j < l; ++j) {
          const double d = std::fabs(lows[g * l + j] - cb.low_points[k]);
          if (d < best[j]) {
            best[j] = d;
            out.low[g * l + j] = static_cast<std::uint32_t>(k);
          }
        }
      }
      if (stats) stats->distance_evaluations += cb.low_points.size();
    }
  } else {
    out.high = quantize_batch(cb.high_vq, highs, SearchMode::accelerated, nullptr, threads);
    for (std::size_t i = 0; i < n; ++i) out.low[i] = quantize_low(lows[i], cfg.theta, cfg.q_low);
  }
  return out;
}

IQStream dequantize_upmgq(const UpmgqCodebook& cb, const UpmgqSymbols& symbols) {
  const auto& cfg = cb.config;
  const auto l = static_cast<std::size_t>(cfg.l_upmgq);
  const std::size_t n = symbols.high.size() * l;
  if (symbols.negative.size() != n || symbols.low.size() != n) throw FormatError("upmgq: section sizes disagree");
  VectorBatch groups;
  groups.l_vq = cfg.l_upmgq;
  groups.layout = VectorLayout::consecutive_same_component;
  groups.original_count = symbols.sample_count;
  groups.values.resize(n);
  const double unit = std::ldexp(1.0, cfg.theta);
  for (std::size_t g = 0; g < symbols.high.size(); ++g) {
    if (symbols.high[g] >= cb.high_vq.size()) throw FormatError("upmgq: high index out of range");
    const auto c = cb.high_vq[symbols.high[g]];
    for (std::size_t j = 0; j < l; ++j) {
      const std::size_t i = g * l + j;
      if (symbols.low[i] >= cb.low_points.size()) throw FormatError("upmgq: low code out of range");
      const double mag = static_cast<double>(c[j]) * unit + cb.low_points[symbols.low[i]];
      groups.values[i] = symbols.negative[i] ? -mag : mag;
    }
  }
  return devectorize(groups);
}

double cr_upmgq(double l_high, int l_upmgq, double l_low, int q0) {
  require(l_high >= 0.0 && l_low >= 0.0 && l_upmgq >= 1 && q0 >= 1, "cr_upmgq: invalid lengths");
  return static_cast<double>(q0) / (1.0 + l_high / l_upmgq + l_low);
}

Complexity upmgq_complexity(const UpmgqConfig& config) {
  config.validate();
  const auto v = codebook_size(config.l_upmgq, config.q_high) + (std::uint64_t{1} << config.q_low);
  return {v, v};
}

std::vector<std::uint8_t> encode_upmgq_model(const UpmgqCodebook& cb) {
  cb.validate();
  const auto& c = cb.config;
  ByteWriter out;
  out.tag(kMagic);
  out.u8(kVersion);
  out.u8(static_cast<std::uint8_t>(static_cast<std::int8_t>(c.theta)));
  out.u8(static_cast<std::uint8_t>(c.q_high));
  out.u8(static_cast<std::uint8_t>(c.l_upmgq));
  out.u8(static_cast<std::uint8_t>(c.q_low));
  out.u8(static_cast<std::uint8_t>(c.q0));
  out.u8(c.low_entropy ? 1 : 0);
  write_vqcb(out, cb.high_vq, &cb.huffman_high);
  if (cb.huffman_low) write_huffman(out, *cb.huffman_low);
  return out.take();
}

UpmgqCodebook decode_upmgq_model(std::span<const std::uint8_t> bytes) {
  ByteReader in(bytes);
  in.expect_tag(kMagic, "UPMG codebook");
  if (in.u8() != kVersion) throw FormatError("UPMG: unsupported version");
  UpmgqCodebook cb;
  auto& c = cb.config;
  c.theta = static_cast<std::int8_t>(in.u8());
  c.q_high = in.u8();
  c.l_upmgq = in.u8();
  c.q_low = in.u8();
  c.q0 = in.u8();
  const auto flag = in.u8();
  if (flag > 1) throw FormatError("UPMG: bad low-entropy flag");
  c.low_entropy = flag == 1;
  try {
    c.validate();
  } catch (const ContractError& e) {
    throw FormatError(std::string("UPMG: ") + e.what());
  }
  bool has = false;
  cb.high_vq = read_vqcb(in, &cb.huffman_high, &has);
  if (!has) cb.huffman_high = huffman_from_usage(cb.high_vq);
  if (c.low_entropy) cb.huffman_low = read_huffman(in);
  cb.low_points = low_reconstruction_points(c.theta, c.q_low);
  try {
    cb.validate();
  } catch (const ContractError& e) {
    throw FormatError(std::string("UPMG: ") + e.what());
  }
  if (in.remaining() != 0) throw FormatError("UPMG: trailing bytes");
  return cb;
}

}  // namespace fvq

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

#include "fvq/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <string>

#include "fvq/error.hpp"
#include "fvq/iq_file.hpp"

namespace fvq {
namespace {

constexpr std::string_view kMagic{"CPZ1", 4};
constexpr std::uint8_t kVersion = 1;

enum Flags : std::uint8_t {
  kEntropy = 1,
  kCp = 2,
  kDecimation = 4,
  kScaling = 8,
  kLowEntropy = 16,
};

std::uint8_t profile_flags(const CompressionProfile& p) {
  std::uint8_t f = 0;
  if (p.entropy) f |= kEntropy;
  if (p.cp()) f |= kCp;
  if (p.decimation) f |= kDecimation;
  if (p.block_scaling) f |= kScaling;
  if (p.quantizer == QuantizerKind::upmgq && p.upmgq.low_entropy) f |= kLowEntropy;
  return f;
}

// Cyclic filtering applies when CP-free symbol bodies map to whole output periods.
std::size_t cyclic_period(const CompressionProfile& p, ResampleDirection dir) {
  const auto cp = p.cp();
  if (!cp || !p.decimation) return 0;
  const auto spec = p.decimation->reduced();
  const auto sym = static_cast<std::size_t>(cp->l_sym);
  if (sym * static_cast<std::size_t>(spec.up) % static_cast<std::size_t>(spec.down) != 0) return 0;
  return dir == ResampleDirection::decimate ? sym : sym * static_cast<std::size_t>(spec.up) / static_cast<std::size_t>(spec.down);
}

std::size_t decimated_length(const CompressionProfile& p, std::size_t n) {
  if (!p.decimation || n == 0) return n;
  const auto spec = p.decimation->reduced();
  const auto u = static_cast<std::size_t>(spec.up);
  const auto d = static_cast<std::size_t>(spec.down);
  if (cyclic_period(p, ResampleDirection::decimate) != 0) return n * u / d;
  return (n * u + d - 1) / d;
}

std::size_t cp_stripped_length(const CompressionProfile& p, std::size_t m) {
  const auto cp = p.cp();
  if (!cp) return m;
  const auto period = static_cast<std::size_t>(cp->l_sym + cp->l_cp);
  if (m % period != 0) throw FormatError("sample count is not a whole number of symbols");
  return m / period * static_cast<std::size_t>(cp->l_sym);
}

struct Section {
  std::vector<std::uint8_t> bytes;
  std::uint64_t bits = 0;
  std::uint64_t symbols = 0;
};

Section finish(BitWriter& w, std::uint64_t symbols) {
  Section s;
  s.bits = w.bit_count();
  s.bytes = w.finish();
  s.symbols = symbols;
  return s;
}

void encode_indices(std::span<const std::uint32_t> idx, const HuffmanTable* table, unsigned width, Section& out) {
  BitWriter w;
  if (table) {
    huffman_encode(*table, idx, w);
  } else {
    for (auto i : idx) w.put(i, width);
  }
  out = finish(w, idx.size());
}

std::vector<std::uint32_t> decode_indices(const Section& s, const HuffmanTable* table, unsigned width) {
  BitReader r(s.bytes, s.bits);
  std::vector<std::uint32_t> out;
  if (table) {
    out = huffman_decode(*table, r, s.symbols);
  } else {
    out.resize(s.symbols);
    for (auto& v : out) v = static_cast<std::uint32_t>(r.get(width));
  }
  if (r.remaining() != 0) throw FormatError("section has trailing bits");
  return out;
}

IQStream stream_from_batch(const VectorBatch& batch, VectorLayout layout, std::uint64_t seed, std::size_t count) {
  VectorBatch b = batch;
  b.layout = layout;
  b.permutation_seed = layout == VectorLayout::random_permutation ? seed : 0;
  b.original_count = count;
  return devectorize(b);
}

}  // namespace

// ---------------------------------------------------------------------------
// Models

QuantizerKind model_kind(const QuantizerModel& model) {
  switch (model.index()) {
    case 1:
      return QuantizerKind::vq;
    case 2:
      return QuantizerKind::msvq;
    case 3:
      return QuantizerKind::upmgq;
    default:
      return QuantizerKind::raw;
  }
}

std::vector<std::uint8_t> encode_model(const QuantizerModel& model) {
  if (const auto* v = std::get_if<VqModel>(&model)) return encode_vq_model(*v);
  if (const auto* m = std::get_if<MsvqModel>(&model)) return encode_msvq_model(*m);
  if (const auto* u = std::get_if<UpmgqCodebook>(&model)) return encode_upmgq_model(*u);
  throw ContractError("raw passthrough has no codebook to save");
}

QuantizerModel decode_model(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4) throw FormatError("codebook container too short");
  const std::string_view magic(reinterpret_cast<const char*>(bytes.data()), 4);
  if (magic == "VQCB") return decode_vq_model(bytes);
  if (magic == "VQMS") return decode_msvq_model(bytes);
  if (magic == "UPMG") return decode_upmgq_model(bytes);
  throw FormatError("unrecognised codebook container");
}

void save_model(const std::filesystem::path& path, const QuantizerModel& model) {
  write_file(path, encode_model(model));
}

QuantizerModel load_model(const std::filesystem::path& path) { return decode_model(read_file(path)); }

void check_model(const CompressionProfile& profile, const QuantizerModel& model) {
  require(model_kind(model) == profile.quantizer, "codebook is a " + std::string(to_string(model_kind(model))) +
                                                      " model but the profile selects " +
                                                      std::string(to_string(profile.quantizer)));
  switch (profile.quantizer) {
    case QuantizerKind::raw:
      break;
    case QuantizerKind::vq: {
      const auto& cb = std::get<VqModel>(model).codebook;
      require(cb.l_vq == profile.vq.l_vq && cb.q_vq == profile.vq.q_vq,
              "codebook geometry (l=" + std::to_string(cb.l_vq) + ", q=" + std::to_string(cb.q_vq) +
                  ") does not match the profile");
      break;
    }
    case QuantizerKind::msvq: {
      const auto& cb = std::get<MsvqModel>(model).codebook;
      require(cb.l == profile.msvq.l && cb.q1 == profile.msvq.q1 && cb.q2 == profile.msvq.q2,
              "msvq codebook geometry does not match the profile");
      break;
    }
    case QuantizerKind::upmgq: {
      const auto& c = std::get<UpmgqCodebook>(model).config;
      const auto& p = profile.upmgq;
      require(c.theta == p.theta && c.q_high == p.q_high && c.l_upmgq == p.l_upmgq && c.q_low == p.q_low &&
                  c.low_entropy == p.low_entropy,
              "upmgq codebook configuration does not match the profile");
      break;
    }
  }
}

// ---------------------------------------------------------------------------
// Front and back end

FrontEnd front_end(const IQStream& stream, const CompressionProfile& profile) {
  profile.validate();
  FrontEnd fe;
  fe.input_samples = stream.size();
  IQStream s = stream;
  if (const auto cp = profile.cp()) s = remove_cp(s, cp->l_sym, cp->l_cp);
  fe.after_cp = s.size();
  if (profile.decimation && !s.empty()) {
    ResampleOptions opt;
    opt.cyclic_period = cyclic_period(profile, ResampleDirection::decimate);
    s = resample(s, *profile.decimation, ResampleDirection::decimate, opt);
  }
  fe.after_decimation = s.size();
  for (auto& x : s.samples) x *= profile.input_rms;
  if (profile.block_scaling) {
    auto bs = block_scale_to(s, profile.block_scaling->n_bs, profile.block_scaling->q_bs, profile.scale_target());
    s = std::move(bs.stream);
    fe.scale = std::move(bs.scale);
  }
  fe.stream = std::move(s);
  return fe;
}

IQStream back_end(const IQStream& reconstructed, const std::optional<ScaleFactors>& scale,
                  const CompressionProfile& profile, std::size_t input_samples, std::size_t after_cp,
                  SampleRate rate) {
  IQStream s = reconstructed;
  if (profile.block_scaling) {
    require(scale.has_value(), "back_end: scale factors missing");
    s = block_unscale_from(s, *scale, profile.scale_target());
  }
  const double inv = 1.0 / profile.input_rms;
  for (auto& x : s.samples) x *= inv;
  if (profile.decimation && !s.empty()) {
    ResampleOptions opt;
    opt.output_length = after_cp;
    opt.cyclic_period = cyclic_period(profile, ResampleDirection::interpolate);
    s = resample(s, *profile.decimation, ResampleDirection::interpolate, opt);
  }
  if (const auto cp = profile.cp()) s = reinsert_cp(s, cp->l_sym, cp->l_cp);
  if (s.size() != input_samples) throw FormatError("reconstructed sample count does not match header");
  s.rate = rate;
  return s;
}

IQStream frontend_roundtrip(const IQStream& stream, const CompressionProfile& profile) {
  const FrontEnd fe = front_end(stream, profile);
  return back_end(fe.stream, fe.scale, profile, fe.input_samples, fe.after_cp, stream.rate);
}

// ---------------------------------------------------------------------------
// Rate accounting

double theorem_cr(double cr_cpr, double cr_dec, double cr_vq, double cr_ec, int q_bs, double n_bs, int q0) {
  require(cr_cpr > 0 && cr_dec > 0 && cr_vq > 0 && cr_ec > 0, "theorem_cr: gains must be positive");
  require(q_bs >= 0 && q0 > 0, "theorem_cr: invalid bit widths");
  const double overhead = q_bs == 0 ? 0.0 : static_cast<double>(q_bs) / (2.0 * q0 * n_bs);
  return 1.0 / (1.0 / (cr_cpr * cr_dec * cr_vq * cr_ec) + overhead);
}

double compression_ratio(const CompressionProfile& profile, const StageStats& stats) {
  const int n_bs = profile.block_scaling ? profile.block_scaling->n_bs : 1;
  return theorem_cr(stats.cr_cpr, stats.cr_dec, stats.cr_vq, stats.cr_ec, profile.q_bs(),
                    n_bs * stats.cr_cpr * stats.cr_dec, profile.q0);
}

// ---------------------------------------------------------------------------
// Bitstream

Compressed compress(const IQStream& stream, const CompressionProfile& profile, const QuantizerModel& model,
                    unsigned threads) {
  profile.validate();
  check_model(profile, model);
  const FrontEnd fe = front_end(stream, profile);
  const IQStream& s = fe.stream;

  Compressed out;
  StageStats& st = out.stats;
  st.input_samples = fe.input_samples;
  st.after_cp = fe.after_cp;
  st.after_decimation = fe.after_decimation;
  st.q0 = profile.q0;
  st.q_bs = profile.q_bs();
  st.n_bs = profile.block_scaling ? profile.block_scaling->n_bs : 0;
  if (const auto cp = profile.cp()) st.cr_cpr = cp_removal_gain(cp->l_sym, cp->l_cp);
  if (profile.decimation) st.cr_dec = profile.decimation->decimation_gain();

  std::vector<Section> sections;
  if (fe.scale) {
    BitWriter w;
    for (auto f : fe.scale->factors) w.put(f, static_cast<unsigned>(fe.scale->q_bs));
    sections.push_back(finish(w, fe.scale->factors.size()));
    st.scale_bits = sections.back().bits;
  }

  const int q0 = profile.q0;
  switch (profile.quantizer) {
    case QuantizerKind::raw: {
      BitWriter w;
      const double lim = std::ldexp(1.0, q0 - 1) - 1.0;
      const std::uint64_t mask = q0 >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << q0) - 1;
      for (const auto& x : s.samples) {
        for (double c : {x.real(), x.imag()}) {
          const auto v = static_cast<std::int64_t>(std::clamp(std::nearbyint(c), -lim, lim));
          w.put(static_cast<std::uint64_t>(v) & mask, static_cast<unsigned>(q0));
        }
      }
      sections.push_back(finish(w, 2 * s.size()));
      st.vectors = 2 * s.size();
      break;
    }
    case QuantizerKind::vq: {
      const auto& m = std::get<VqModel>(model);
      const auto batch = vectorize(s, profile.vector_method, m.codebook.l_vq, profile.permutation_seed);
      const auto idx = quantize_batch(m.codebook, batch, SearchMode::accelerated, nullptr, threads);
      Section sec;
      encode_indices(idx, profile.entropy ? &m.huffman : nullptr,
                     static_cast<unsigned>(m.codebook.l_vq * m.codebook.q_vq), sec);
      sections.push_back(std::move(sec));
      st.vectors = idx.size();
      st.l_huff_table = profile.entropy ? m.huffman.avg_length : m.codebook.l_vq * m.codebook.q_vq;
      break;
    }
    case QuantizerKind::msvq: {
      const auto& m = std::get<MsvqModel>(model);
      const auto batch = vectorize(s, profile.vector_method, m.codebook.l, profile.permutation_seed);
      const auto pairs = quantize_msvq_batch(m.codebook, batch, SearchMode::accelerated, nullptr, threads);
      std::vector<std::uint32_t> joint(pairs.size());
      for (std::size_t i = 0; i < pairs.size(); ++i) joint[i] = msvq_joint(m.codebook, pairs[i]);
      Section sec;
      encode_indices(joint, profile.entropy ? &m.huffman : nullptr,
                     static_cast<unsigned>(m.codebook.l * (m.codebook.q1 + m.codebook.q2)), sec);
      sections.push_back(std::move(sec));
      st.vectors = joint.size();
      st.l_huff_table = profile.entropy ? m.huffman.avg_length : m.codebook.l * (m.codebook.q1 + m.codebook.q2);
      break;
    }
    case QuantizerKind::upmgq: {
      const auto& m = std::get<UpmgqCodebook>(model);
      const auto& c = m.config;
      const auto sym = quantize_upmgq(m, s, SearchMode::accelerated, nullptr, threads);
      BitWriter g1;
      for (auto n : sym.negative) g1.put(n, 1);
      sections.push_back(finish(g1, sym.negative.size()));
      Section g2;
      encode_indices(sym.high, profile.entropy ? &m.huffman_high : nullptr,
                     static_cast<unsigned>(c.q_high * c.l_upmgq), g2);
      sections.push_back(std::move(g2));
      Section g3;
      encode_indices(sym.low, m.huffman_low ? &*m.huffman_low : nullptr, static_cast<unsigned>(c.q_low), g3);
      sections.push_back(std::move(g3));
      st.vectors = sym.high.size();
      st.l_huff_table = profile.entropy ? m.huffman_high.avg_length : c.q_high * c.l_upmgq;
      break;
    }
  }

  const std::size_t first_payload = fe.scale ? 1 : 0;
  for (std::size_t i = 0; i < sections.size(); ++i) {
    st.section_bits.push_back(sections[i].bits);
    st.padding_bits += 8 * sections[i].bytes.size() - sections[i].bits;
    if (i >= first_payload) st.payload_bits += sections[i].bits;
  }

  // Gains. The quantizer-plus-entropy product is measured on this stream.
  switch (profile.quantizer) {
    case QuantizerKind::raw:
      break;
    case QuantizerKind::vq:
    case QuantizerKind::msvq: {
      const int bits = profile.quantizer_bits();
      const int l = profile.vector_length();
      st.cr_vq = vq_gain(q0, bits);
      st.l_huff = st.vectors ? static_cast<double>(st.payload_bits) / static_cast<double>(st.vectors)
                             : static_cast<double>(l * bits);
      st.cr_ec = profile.entropy && st.l_huff > 0.0 ? ec_gain(st.l_huff, l, bits) : 1.0;
      break;
    }
    case QuantizerKind::upmgq: {
      const auto& c = profile.upmgq;
      const std::uint64_t g2 = sections[first_payload + 1].bits;
      const std::uint64_t g3 = sections[first_payload + 2].bits;
      const std::uint64_t comps = sections[first_payload].symbols;
      st.l_huff = st.vectors ? static_cast<double>(g2) / static_cast<double>(st.vectors)
                             : static_cast<double>(c.q_high * c.l_upmgq);
      st.l_low = comps ? static_cast<double>(g3) / static_cast<double>(comps) : static_cast<double>(c.q_low);
      st.cr_vq = static_cast<double>(q0) / (1.0 + c.q_high + c.q_low);
      st.cr_ec = cr_upmgq(st.l_huff, c.l_upmgq, st.l_low, q0) / st.cr_vq;
      break;
    }
  }
  st.cr_formula = compression_ratio(profile, st);
  st.cr_formula_nominal = theorem_cr(st.cr_cpr, st.cr_dec, st.cr_vq, st.cr_ec, st.q_bs,
                                     std::max(st.n_bs, 1), q0);
  const std::uint64_t sent = st.scale_bits + st.payload_bits;
  st.cr_measured = sent ? 2.0 * q0 * static_cast<double>(st.input_samples) / static_cast<double>(sent) : 0.0;

  ByteWriter h;
  h.tag(kMagic);
  h.u8(kVersion);
  h.u8(static_cast<std::uint8_t>(profile.quantizer));
  h.u8(static_cast<std::uint8_t>(profile.vector_method));
  h.u8(profile_flags(profile));
  h.u64(profile_digest(profile));
  h.u64(fe.input_samples);
  h.u64(stream.rate.num);
  h.u64(stream.rate.den);
  h.u64(profile.permutation_seed);
  h.u64(s.size());
  h.u32(static_cast<std::uint32_t>(sections.size()));
  for (const auto& sec : sections) {
    h.u64(sec.bits);
    h.u64(sec.symbols);
  }
  st.header_bits = 8 * h.size();
  for (const auto& sec : sections) h.raw(sec.bytes);
  out.bytes = h.take();
  return out;
}

IQStream decompress(std::span<const std::uint8_t> bytes, const CompressionProfile& profile,
                    const QuantizerModel& model, unsigned threads) {
  (void)threads;
  profile.validate();
  check_model(profile, model);
  ByteReader in(bytes);
  in.expect_tag(kMagic, "CPZ1 bitstream");
  const auto version = in.u8();
  if (version != kVersion) throw FormatError("CPZ1: unsupported version " + std::to_string(version));
  const auto kind = in.u8();
  const auto layout = in.u8();
  const auto flags = in.u8();
  const auto digest = in.u64();
  if (digest != profile_digest(profile)) throw FormatError("CPZ1: profile digest mismatch");
  if (kind != static_cast<std::uint8_t>(profile.quantizer) ||
      layout != static_cast<std::uint8_t>(profile.vector_method) || flags != profile_flags(profile)) {
    throw FormatError("CPZ1: header fields disagree with the profile");
  }
  const std::uint64_t m = in.u64();
  SampleRate rate;
  rate.num = in.u64();
  rate.den = in.u64();
  if (rate.num == 0 || rate.den == 0) throw FormatError("CPZ1: invalid sample rate");
  const std::uint64_t seed = in.u64();
  if (seed != profile.permutation_seed) throw FormatError("CPZ1: permutation seed disagrees with the profile");
  const std::uint64_t quantized = in.u64();
  const std::uint32_t count = in.u32();
  if (count > 8) throw FormatError("CPZ1: too many sections");
  std::vector<Section> sections(count);
  for (auto& sec : sections) {
    sec.bits = in.u64();
    sec.symbols = in.u64();
  }
  for (auto& sec : sections) {
    const std::uint64_t nbytes = (sec.bits + 7) / 8;
    if (nbytes > in.remaining()) throw FormatError("CPZ1: bitstream truncated");
    const auto raw = in.raw(static_cast<std::size_t>(nbytes));
    sec.bytes.assign(raw.begin(), raw.end());
    if (sec.bits % 8 != 0 && (sec.bytes.back() & ((1U << (8 - sec.bits % 8)) - 1)) != 0) {
      throw FormatError("CPZ1: nonzero padding bits");
    }
  }
  if (in.remaining() != 0) throw FormatError("CPZ1: trailing bytes after last section");

  const std::size_t after_cp = cp_stripped_length(profile, m);
  if (decimated_length(profile, after_cp) != quantized) {
    throw FormatError("CPZ1: quantized sample count disagrees with the header");
  }
  const int l = profile.vector_length();
  const std::size_t comps = 2 * quantized;
  const std::size_t vectors = (comps + static_cast<std::size_t>(l) - 1) / static_cast<std::size_t>(l);

  std::size_t next = 0;
  std::optional<ScaleFactors> scale;
  if (profile.block_scaling) {
    if (sections.size() < 1) throw FormatError("CPZ1: missing scale section");
    const auto& sec = sections[next++];
    ScaleFactors sf;
    sf.n_bs = profile.block_scaling->n_bs;
    sf.q_bs = profile.block_scaling->q_bs;
    const std::size_t blocks = (quantized + static_cast<std::size_t>(sf.n_bs) - 1) / static_cast<std::size_t>(sf.n_bs);
    if (sec.symbols != blocks || sec.bits != blocks * static_cast<std::uint64_t>(sf.q_bs)) {
      throw FormatError("CPZ1: scale section size mismatch");
    }
    BitReader r(sec.bytes, sec.bits);
    sf.factors.resize(blocks);
    for (auto& f : sf.factors) {
      f = static_cast<std::uint32_t>(r.get(static_cast<unsigned>(sf.q_bs)));
      if (f == 0) throw FormatError("CPZ1: zero scale factor");
    }
    scale = std::move(sf);
  }
  const std::size_t expected_sections = next + (profile.quantizer == QuantizerKind::upmgq ? 3 : 1);
  if (sections.size() != expected_sections) throw FormatError("CPZ1: unexpected section count");

  IQStream rec;
  switch (profile.quantizer) {
    case QuantizerKind::raw: {
      const auto& sec = sections[next];
      const int q0 = profile.q0;
      if (sec.symbols != comps || sec.bits != comps * static_cast<std::uint64_t>(q0)) {
        throw FormatError("CPZ1: raw section size mismatch");
      }
      BitReader r(sec.bytes, sec.bits);
      rec.samples.resize(quantized);
      auto signed_value = [&]() {
        const std::uint64_t u = r.get(static_cast<unsigned>(q0));
        const std::uint64_t sign = std::uint64_t{1} << (q0 - 1);
        return static_cast<double>(static_cast<std::int64_t>(u ^ sign) - static_cast<std::int64_t>(sign));
      };
      for (auto& x : rec.samples) {
        const double re = signed_value();
        const double im = signed_value();
        x = {re, im};
      }
      break;
    }
    case QuantizerKind::vq: {
      const auto& mdl = std::get<VqModel>(model);
      const auto& sec = sections[next];
      if (sec.symbols != vectors) throw FormatError("CPZ1: index count mismatch");
      const auto idx = decode_indices(sec, profile.entropy ? &mdl.huffman : nullptr,
                                      static_cast<unsigned>(mdl.codebook.l_vq * mdl.codebook.q_vq));
      rec = stream_from_batch(dequantize_batch(mdl.codebook, idx), profile.vector_method, profile.permutation_seed,
                              quantized);
      break;
    }
    case QuantizerKind::msvq: {
      const auto& mdl = std::get<MsvqModel>(model);
      const auto& sec = sections[next];
      if (sec.symbols != vectors) throw FormatError("CPZ1: index count mismatch");
      const auto joint = decode_indices(sec, profile.entropy ? &mdl.huffman : nullptr,
                                        static_cast<unsigned>(mdl.codebook.l * (mdl.codebook.q1 + mdl.codebook.q2)));
      std::vector<MsvqIndex> pairs(joint.size());
      for (std::size_t i = 0; i < joint.size(); ++i) pairs[i] = msvq_split(mdl.codebook, joint[i]);
      rec = stream_from_batch(dequantize_msvq_batch(mdl.codebook, pairs), profile.vector_method,
                              profile.permutation_seed, quantized);
      break;
    }
    case QuantizerKind::upmgq: {
      const auto& mdl = std::get<UpmgqCodebook>(model);
      const auto& c = mdl.config;
      UpmgqSymbols sym;
      sym.sample_count = quantized;
      const std::size_t padded = vectors * static_cast<std::size_t>(l);
      const auto& s1 = sections[next];
      if (s1.symbols != padded || s1.bits != padded) throw FormatError("CPZ1: sign section size mismatch");
      BitReader r1(s1.bytes, s1.bits);
      sym.negative.resize(padded);
      for (auto& n : sym.negative) n = static_cast<std::uint8_t>(r1.bit());
      const auto& s2 = sections[next + 1];
      if (s2.symbols != vectors) throw FormatError("CPZ1: high-group count mismatch");
      sym.high = decode_indices(s2, profile.entropy ? &mdl.huffman_high : nullptr,
                                static_cast<unsigned>(c.q_high * c.l_upmgq));
      const auto& s3 = sections[next + 2];
      if (s3.symbols != padded) throw FormatError("CPZ1: low-group count mismatch");
      sym.low = decode_indices(s3, mdl.huffman_low ? &*mdl.huffman_low : nullptr, static_cast<unsigned>(c.q_low));
      rec = dequantize_upmgq(mdl, sym);
      break;
    }
  }
  if (rec.size() != quantized) throw FormatError("CPZ1: reconstructed sample count mismatch");
  return back_end(rec, scale, profile, m, after_cp, rate);
}

// ---------------------------------------------------------------------------
// Training

IQStream training_stream(std::span<const IQStream> corpus, const CompressionProfile& profile) {
  IQStream out;
  for (const auto& s : corpus) {
    auto fe = front_end(s, profile);
    if (out.samples.empty()) out.rate = fe.stream.rate;
    out.samples.insert(out.samples.end(), fe.stream.samples.begin(), fe.stream.samples.end());
  }
  return out;
}

QuantizerModel train_model(const IQStream& prepared, const CompressionProfile& profile, const TrainingParams& params,
                           unsigned threads, TrainingTrace* trace) {
  profile.validate();
  switch (profile.quantizer) {
    case QuantizerKind::raw:
      return std::monostate{};
    case QuantizerKind::vq: {
      const auto batch = vectorize(prepared, profile.vector_method, profile.vq.l_vq, profile.permutation_seed);
      return make_vq_model(train_codebook(params.trainer, batch, profile.vq.q_vq, params.trials, params.stop,
                                          params.seed, trace, threads, params.init));
    }
    case QuantizerKind::msvq: {
      const auto batch = vectorize(prepared, profile.vector_method, profile.msvq.l, profile.permutation_seed);
      return make_msvq_model(train_msvq(batch, profile.msvq.q1, profile.msvq.q2, params.trainer, params.trials,
                                        params.stop, params.seed, nullptr, threads, params.init));
    }
    case QuantizerKind::upmgq:
      return train_upmgq(prepared, profile.upmgq, params.trainer, params.trials, params.stop, params.seed, threads,
                         params.init);
  }
  return std::monostate{};
}

}  // namespace fvq

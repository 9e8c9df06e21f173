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

#include "fvq/iq_file.hpp"

#include <fstream>
#include <iterator>
#include <limits>
#include <string_view>

#include "fvq/bit_io.hpp"
#include "fvq/error.hpp"

namespace fvq {
namespace {
constexpr std::string_view kMagic{"IQF1\0\0\0\0", 8};
}

double mean_power(std::span<const Complex> samples) {
  if (samples.empty()) return 0.0;
  double acc = 0.0;
  for (const auto& s : samples) acc += std::norm(s);
  return acc / static_cast<double>(samples.size());
}

std::vector<std::uint8_t> encode_iqf(const IQStream& stream) {
  require(stream.size() <= std::numeric_limits<std::uint32_t>::max(),
          "IQF1 holds at most 2^32-1 samples");
  ByteWriter w;
  w.tag(kMagic);
  w.u32(static_cast<std::uint32_t>(stream.size()));
  w.u64(stream.rate.num);
  w.u64(stream.rate.den);
  for (const auto& s : stream.samples) {
    w.f32(static_cast<float>(s.real()));
    w.f32(static_cast<float>(s.imag()));
  }
  return w.take();
}

IQStream decode_iqf(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  r.expect_tag(kMagic, "IQF1");
  const std::uint32_t count = r.u32();
  IQStream out;
  out.rate.num = r.u64();
  out.rate.den = r.u64();
  if (out.rate.den == 0) throw FormatError("IQF1: zero sample-rate denominator");
  if (r.remaining() != static_cast<std::size_t>(count) * 8) {
    throw FormatError("IQF1: payload size does not match sample count");
  }
  out.samples.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    const float re = r.f32();
    const float im = r.f32();
    out.samples.emplace_back(re, im);
  }
  return out;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed: " + path.string());
}

void write_iqf(const std::filesystem::path& path, const IQStream& stream) {
  write_file(path, encode_iqf(stream));
}

IQStream read_iqf(const std::filesystem::path& path) {
  auto s = decode_iqf(read_file(path));
  s.provenance = path.string();
  return s;
}

}  // namespace fvq

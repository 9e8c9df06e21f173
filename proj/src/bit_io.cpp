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

#include "fvq/bit_io.hpp"

#include <bit>
#include <cstring>
#include <string>

#include "fvq/error.hpp"

namespace fvq {

void ByteWriter::u32(std::uint32_t v) {
  for (int i = 0; i < 4; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void ByteWriter::u64(std::uint64_t v) {
  for (int i = 0; i < 8; ++i) bytes_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void ByteWriter::f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }

void ByteReader::need(std::size_t n) const {
  if (data_.size() - pos_ < n) {
    throw FormatError("unexpected end of data at byte " + std::to_string(pos_));
  }
}

std::uint8_t ByteReader::u8() {
  need(1);
  return data_[pos_++];
}

std::uint32_t ByteReader::u32() {
  need(4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(data_[pos_++]) << (8 * i);
  return v;
}

std::uint64_t ByteReader::u64() {
  need(8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(data_[pos_++]) << (8 * i);
  return v;
}

float ByteReader::f32() { return std::bit_cast<float>(u32()); }

std::span<const std::uint8_t> ByteReader::raw(std::size_t n) {
  need(n);
  auto out = data_.subspan(pos_, n);
  pos_ += n;
  return out;
}

void ByteReader::expect_tag(std::string_view magic, std::string_view what) {
  auto got = raw(magic.size());
  if (std::memcmp(got.data(), magic.data(), magic.size()) != 0) {
    throw FormatError("bad magic: not a " + std::string(what) + " file");
  }
}

void BitWriter::put(std::uint64_t value, unsigned width) {
  for (unsigned i = width; i-- > 0;) {
    const auto byte = static_cast<std::size_t>(bits_ >> 3);
    if (byte == bytes_.size()) bytes_.push_back(0);
    if ((value >> i) & 1U) bytes_[byte] |= static_cast<std::uint8_t>(0x80U >> (bits_ & 7U));
    ++bits_;
  }
}

std::vector<std::uint8_t> BitWriter::finish() { return std::move(bytes_); }

BitReader::BitReader(std::span<const std::uint8_t> data, std::uint64_t bit_length)
    : data_(data), limit_(bit_length) {
  if (bit_length > static_cast<std::uint64_t>(data.size()) * 8) {
    throw FormatError("declared bit length exceeds available data");
  }
}

unsigned BitReader::bit() {
  if (pos_ >= limit_) throw FormatError("bitstream truncated");
  const unsigned b = (data_[pos_ >> 3] >> (7U - (pos_ & 7U))) & 1U;
  ++pos_;
  return b;
}

std::uint64_t BitReader::get(unsigned width) {
  if (limit_ - pos_ < width) throw FormatError("bitstream truncated");
  std::uint64_t v = 0;
  for (unsigned i = 0; i < width; ++i) v = (v << 1) | bit();
  return v;
}

}  // namespace fvq

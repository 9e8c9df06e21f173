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

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "fvq/iq_stream.hpp"

namespace fvq {

// IQF1 layout (little-endian):
//   8 bytes  magic "IQF1\0\0\0\0"
//   u32      sample count M
//   u64      sample-rate numerator
//   u64      sample-rate denominator
//   M x (f32 I, f32 Q)
std::vector<std::uint8_t> encode_iqf(const IQStream& stream);
IQStream decode_iqf(std::span<const std::uint8_t> bytes);

void write_iqf(const std::filesystem::path& path, const IQStream& stream);
IQStream read_iqf(const std::filesystem::path& path);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace fvq

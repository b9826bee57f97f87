// Copyright 2026 The Microshift Authors. All Rights Reserved.
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
#include <string>
#include <vector>

#include "microshift/core.hpp"

namespace microshift {

using Bytes = std::vector<std::uint8_t>;

// Header plus N² bitstreams per plane, stored in subimage order.
//
// Layout (little-endian): "MSH1" | version u8 = 1 | M u8 | N u8 | planes u8 |
// width u16 | height u16 | table CRC-32 u32 | 3 reserved zero bytes | then per
// plane and per subimage j = 1..N²: u32 byte length followed by the payload.
struct CompressedContainer {
  CodecParams params;
  int width = 0;
  int height = 0;
  std::uint32_t table_crc = 0;
  std::vector<std::vector<Bytes>> streams;  // [plane][j - 1]

  int planes() const { return static_cast<int>(streams.size()); }
  std::size_t payload_bytes() const;
};

inline constexpr std::size_t kContainerHeaderBytes = 19;

std::string serialize_container(const CompressedContainer& container);
// Throws FormatError on a bad header and TruncatedStream on a short payload.
CompressedContainer parse_container(const std::string& bytes);
CompressedContainer read_container(const std::filesystem::path& path);
void write_container(const CompressedContainer& container, const std::filesystem::path& path);

}  // namespace microshift

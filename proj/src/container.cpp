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

#include "microshift/container.hpp"

#include <fstream>
#include <iterator>
#include <numeric>
#include <stdexcept>

#include "microshift/residue_coding.hpp"

namespace microshift {

std::size_t CompressedContainer::payload_bytes() const {
  std::size_t total = 0;
  for (const auto& plane : streams) {
    for (const auto& s : plane) total += s.size();
  }
  return total;
}

namespace {

void put_le(std::string& out, std::uint32_t v, int width) {
  for (int i = 0; i < width; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint32_t get_le(const std::string& bytes, std::size_t pos, int width) {
  std::uint32_t v = 0;
  for (int i = width - 1; i >= 0; --i) v = (v << 8) | static_cast<std::uint8_t>(bytes[pos + i]);
  return v;
}

}  // namespace

std::string serialize_container(const CompressedContainer& c) {
  const int n2 = c.params.num_subimages();
  if (c.planes() != 1 && c.planes() != 3) throw std::invalid_argument("container must hold 1 or 3 planes");
  for (const auto& plane : c.streams) {
    if (static_cast<int>(plane.size()) != n2) throw std::invalid_argument("container plane needs N² streams");
  }
  std::string out = "MSH1";
  out.push_back(1);
  out.push_back(static_cast<char>(c.params.bits));
  out.push_back(static_cast<char>(c.params.side));
  out.push_back(static_cast<char>(c.planes()));
  put_le(out, static_cast<std::uint32_t>(c.width), 2);
  put_le(out, static_cast<std::uint32_t>(c.height), 2);
  put_le(out, c.table_crc, 4);
  out.append(3, '\0');
  for (const auto& plane : c.streams) {
    for (const auto& s : plane) {
      put_le(out, static_cast<std::uint32_t>(s.size()), 4);
      out.append(reinterpret_cast<const char*>(s.data()), s.size());
    }
  }
  return out;
}

CompressedContainer parse_container(const std::string& bytes) {
  if (bytes.size() < kContainerHeaderBytes || bytes.compare(0, 4, "MSH1") != 0) {
    throw FormatError("container: bad magic");
  }
  if (bytes[4] != 1) throw FormatError("container: unsupported version");
  CompressedContainer c;
  try {
    c.params = make_params(bytes[5], bytes[6]);
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("container: ") + e.what());
  }
  const int planes = bytes[7];
  if (planes != 1 && planes != 3) throw FormatError("container: plane count must be 1 or 3");
  c.width = static_cast<int>(get_le(bytes, 8, 2));
  c.height = static_cast<int>(get_le(bytes, 10, 2));
  if (c.width < 1 || c.height < 1) throw FormatError("container: empty image");
  c.table_crc = get_le(bytes, 12, 4);
  if (bytes[16] != 0 || bytes[17] != 0 || bytes[18] != 0) throw FormatError("container: reserved bytes set");

  std::size_t pos = kContainerHeaderBytes;
  c.streams.resize(planes);
  for (auto& plane : c.streams) {
    plane.resize(c.params.num_subimages());
    for (auto& s : plane) {
      if (pos + 4 > bytes.size()) throw TruncatedStream("container: missing stream length");
      const std::size_t len = get_le(bytes, pos, 4);
      pos += 4;
      if (pos + len > bytes.size()) throw TruncatedStream("container: stream payload truncated");
      s.assign(bytes.begin() + static_cast<std::ptrdiff_t>(pos),
               bytes.begin() + static_cast<std::ptrdiff_t>(pos + len));
      pos += len;
    }
  }
  if (pos != bytes.size()) throw FormatError("container: trailing bytes");
  return c;
}

CompressedContainer read_container(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return parse_container(std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>()));
}

void write_container(const CompressedContainer& container, const std::filesystem::path& path) {
  const std::string bytes = serialize_container(container);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace microshift

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

#include "microshift/residue_coding.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace microshift {

void BitWriter::put_bit(bool bit) {
  pending_ = (pending_ << 1) | (bit ? 1u : 0u);
  if (++pending_bits_ == 8) {
    bytes_.push_back(static_cast<std::uint8_t>(pending_));
    pending_ = 0;
    pending_bits_ = 0;
  }
}

void BitWriter::put_bits(std::uint32_t value, int count) {
  for (int i = count - 1; i >= 0; --i) put_bit((value >> i) & 1u);
}

std::vector<std::uint8_t> BitWriter::finish() {
  if (pending_bits_ > 0) {
    bytes_.push_back(static_cast<std::uint8_t>(pending_ << (8 - pending_bits_)));
    pending_ = 0;
    pending_bits_ = 0;
  }
  return std::move(bytes_);
}

bool BitReader::get_bit() {
  if (pos_ >= bytes_.size() * 8) throw TruncatedStream("bitstream ended unexpectedly");
  const bool bit = (bytes_[pos_ >> 3] >> (7 - (pos_ & 7))) & 1u;
  ++pos_;
  return bit;
}

std::uint32_t BitReader::get_bits(int count) {
  std::uint32_t v = 0;
  for (int i = 0; i < count; ++i) v = (v << 1) | (get_bit() ? 1u : 0u);
  return v;
}

void rice_encode(BitWriter& out, int k, std::uint32_t value, int escape_bits) {
  const std::uint32_t q = value >> k;
  if (q >= kRiceEscapeQuotient) {
    if (escape_bits < 32 && value >> escape_bits) {
      throw std::invalid_argument("rice_encode: value " + std::to_string(value) +
                                  " does not fit the escape field");
    }
    for (int i = 0; i < kRiceEscapeQuotient; ++i) out.put_bit(true);
    out.put_bit(false);
    out.put_bits(value, escape_bits);
    return;
  }
  for (std::uint32_t i = 0; i < q; ++i) out.put_bit(true);
  out.put_bit(false);
  out.put_bits(value, k);
}

std::uint32_t rice_decode(BitReader& in, int k, int escape_bits) {
  std::uint32_t q = 0;
  while (in.get_bit()) {
    if (++q == kRiceEscapeQuotient) {
      if (in.get_bit()) throw FormatError("rice_decode: malformed escape");
      return in.get_bits(escape_bits);
    }
  }
  return (q << k) | in.get_bits(k);
}

int RiceState::k() const {
  int k = 0;
  while (k < kMaxRiceParameter && (count << k) < acc) ++k;
  return k;
}

void RiceState::update(int mapped) {
  acc += mapped;
  if (++count == kResetCount) {
    count = (count + 1) / 2;
    acc = (acc + 1) / 2;
  }
}

void run_encode(BitWriter& out, RiceState& state, int length, bool reaches_row_end) {
  out.put_bit(reaches_row_end);
  if (reaches_row_end) return;
  rice_encode(out, state.k(), static_cast<std::uint32_t>(length), kRunEscapeBits);
  state.update(length);
}

RunToken run_decode(BitReader& in, RiceState& state) {
  if (in.get_bit()) return {true, 0};
  const int length = static_cast<int>(rice_decode(in, state.k(), kRunEscapeBits));
  state.update(length);
  return {false, length};
}

int map_residue(int eps, int xhat, int bits) {
  const int max_level = (1 << bits) - 1;
  if (eps < -xhat || eps > max_level - xhat) {
    throw std::invalid_argument("map_residue: residue outside the feasible range");
  }
  if (eps == 0) return 0;
  const bool positive_first = xhat < (1 << (bits - 1));
  // `lead` is the side enumerated first at each magnitude.
  const int lead_room = positive_first ? max_level - xhat : xhat;
  const int trail_room = positive_first ? xhat : max_level - xhat;
  const bool on_lead = positive_first ? eps > 0 : eps < 0;
  const int mag = eps < 0 ? -eps : eps;
  const int paired = std::min(lead_room, trail_room);
  if (mag <= paired) return on_lead ? 2 * mag - 1 : 2 * mag;
  return paired + mag;
}

int unmap_residue(int code, int xhat, int bits) {
  const int max_level = (1 << bits) - 1;
  if (code < 0 || code > max_level) throw std::invalid_argument("unmap_residue: code out of range");
  if (code == 0) return 0;
  const bool positive_first = xhat < (1 << (bits - 1));
  const int lead_sign = positive_first ? 1 : -1;
  const int lead_room = positive_first ? max_level - xhat : xhat;
  const int trail_room = positive_first ? xhat : max_level - xhat;
  const int paired = std::min(lead_room, trail_room);
  if (code <= 2 * paired) {
    const int mag = (code + 1) / 2;
    return (code % 2 == 1) ? lead_sign * mag : -lead_sign * mag;
  }
  const int mag = code - paired;
  return lead_room > trail_room ? lead_sign * mag : -lead_sign * mag;
}

}  // namespace microshift

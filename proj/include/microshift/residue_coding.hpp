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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "microshift/core.hpp"

namespace microshift {

// Reading past the end of a bitstream.
class TruncatedStream : public FormatError {
 public:
  using FormatError::FormatError;
};

// MSB-first bit packer; finish() pads the last byte with zeros.
class BitWriter {
 public:
  void put_bit(bool bit);
  void put_bits(std::uint32_t value, int count);
  std::size_t bit_count() const { return bytes_.size() * 8 + pending_bits_; }
  std::vector<std::uint8_t> finish();

 private:
  std::vector<std::uint8_t> bytes_;
  std::uint32_t pending_ = 0;
  int pending_bits_ = 0;
};

class BitReader {
 public:
  explicit BitReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  bool get_bit();
  std::uint32_t get_bits(int count);
  std::size_t position() const { return pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

inline constexpr int kRiceEscapeQuotient = 24;
inline constexpr int kResidueEscapeBits = 8;
inline constexpr int kRunEscapeBits = 16;
inline constexpr int kMaxRiceParameter = 15;

// q = v >> k ones, a zero, then the k low bits of v. A quotient of 24 or more
// is replaced by 24 ones, a zero and v written raw in `escape_bits` bits.
void rice_encode(BitWriter& out, int k, std::uint32_t value, int escape_bits = kResidueEscapeBits);
std::uint32_t rice_decode(BitReader& in, int k, int escape_bits = kResidueEscapeBits);

// LOCO-I style accumulator choosing the Rice parameter of the next sample.
struct RiceState {
  static constexpr int kResetCount = 64;

  int count = 1;
  int acc = 0;

  int k() const;
  void update(int mapped);
};

// Updates the state with `mapped` and returns the parameter for the next sample.
inline int adapt(RiceState& state, int mapped) {
  state.update(mapped);
  return state.k();
}

struct RunState {
  bool active = false;
  int length = 0;
};

// A run that reaches the end of its subimage row is a single 1 bit (the
// decoder knows how many samples remain). An interrupted run is a 0 bit and
// the Rice-coded length; only those lengths feed `state`.
void run_encode(BitWriter& out, RiceState& state, int length, bool reaches_row_end);

struct RunToken {
  bool reaches_row_end = false;
  int length = 0;  // meaningful only for interrupted runs
};
RunToken run_decode(BitReader& in, RiceState& state);

// Bounded zigzag over the feasible residues [−xhat, max_level − xhat]. When
// xhat is below the mid level the order is 0, +1, −1, +2, …; otherwise
// 0, −1, +1, −2, …; once one side is exhausted the other continues alone.
int map_residue(int eps, int xhat, int bits);
int unmap_residue(int code, int xhat, int bits);

}  // namespace microshift

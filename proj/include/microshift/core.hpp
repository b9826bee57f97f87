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
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "microshift/image.hpp"

namespace microshift {

// Malformed table or container bytes.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Quantizer resolution M (bits), pattern side N, step Δ = 256 / 2^M and the
// N×N shift table δ_t = round(t·Δ/N²) with halves rounded up.
struct CodecParams {
  int bits = 3;
  int side = 3;
  int delta = 32;
  std::vector<int> shifts;

  int num_levels() const { return 1 << bits; }
  int max_level() const { return num_levels() - 1; }
  int num_subimages() const { return side * side; }
  // Center of the level range; used as the "positive residue is likelier" split.
  int mid_level() const { return 1 << (bits - 1); }

  // 0-based pattern position t of pixel (row, col).
  int pattern_index(int row, int col) const { return (row % side) * side + (col % side); }
  int shift_at(int row, int col) const { return shifts[pattern_index(row, col)]; }

  friend bool operator==(const CodecParams&, const CodecParams&) = default;
};

// Throws std::invalid_argument unless bits ∈ {2,3,4} and side ∈ {3,4}.
CodecParams make_params(int bits, int side);
inline CodecParams default_params() { return make_params(3, 3); }

inline int quantize_level(int value, const CodecParams& params) { return value / params.delta; }

inline int shifted_level(int value, int shift, const CodecParams& params) {
  return quantize_level((value + shift) & 0xFF, params);
}

// 1-based subimage index j of pixel (row, col).
inline int subimage_of(int row, int col, int side) { return (row % side) * side + (col % side) + 1; }

// Level image after microshift sub-quantization. `received` is the number of
// leading subimages whose levels are known; positions of later subimages are
// absent and their level entries are meaningless.
struct QuantizedImage {
  LevelPlane levels;
  CodecParams params;
  int received = 0;

  int width() const { return static_cast<int>(levels.cols()); }
  int height() const { return static_cast<int>(levels.rows()); }

  bool present(int row, int col) const { return subimage_of(row, col, params.side) <= received; }
  MaskPlane presence_mask() const;
};

QuantizedImage microshift_quantize(const ImagePlane& plane, const CodecParams& params);

// The integer set {lo, …, lo + width − 1} on the mod-256 circle.
struct UncertaintyInterval {
  int lo = 0;
  int width = 256;

  bool contains(int value) const { return ((value - lo) & 0xFF) < width; }
  // Lower median of the set read as intensities 0..255. A set running past
  // 255 into 0 is two pieces, and the median falls in the larger one.
  int midpoint() const {
    const int m = (width - 1) / 2;
    if (lo + width <= 256) return lo + m;
    const int low_count = lo + width - 256;
    return m < low_count ? m : lo + (m - low_count);
  }

  friend bool operator==(const UncertaintyInterval&, const UncertaintyInterval&) = default;
};

UncertaintyInterval uncertainty_of(int level, int shift, const CodecParams& params);

// Intersection of two circular intervals whose widths sum to at most 256, or
// nullopt when they are disjoint.
std::optional<UncertaintyInterval> intersect(const UncertaintyInterval& a,
                                             const UncertaintyInterval& b);

// Circular distance between two intensities, in [0, 128].
inline int circular_distance(int a, int b) {
  const int d = (a - b) & 0xFF;
  return d > 128 ? 256 - d : d;
}

struct Observation {
  int level = 0;
  int shift = 0;
};

struct Estimate {
  int value = 0;
  UncertaintyInterval interval;
};

// Starts from the first observation's interval and greedily intersects the
// rest in order, skipping any observation that would empty the running set.
// Throws std::invalid_argument on an empty list.
Estimate heuristic_estimate(std::span<const Observation> observations, const CodecParams& params);

// Pixel offsets (dr, dc) sorted by Euclidean length, ties row-major.
struct Offset {
  int dr = 0;
  int dc = 0;
};
std::vector<Offset> sort_by_distance(std::vector<Offset> offsets);

}  // namespace microshift

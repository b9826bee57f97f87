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

#include "microshift/core.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace microshift {

CodecParams make_params(int bits, int side) {
  if (bits < 2 || bits > 4) {
    throw std::invalid_argument("quantizer bits must be in [2, 4], got " + std::to_string(bits));
  }
  if (side != 3 && side != 4) {
    throw std::invalid_argument("pattern side must be 3 or 4, got " + std::to_string(side));
  }
  CodecParams p;
  p.bits = bits;
  p.side = side;
  p.delta = 256 >> bits;
  const int count = side * side;
  p.shifts.resize(count);
  for (int t = 0; t < count; ++t) {
    // round-half-up of t·Δ/N² in integer arithmetic
    p.shifts[t] = (2 * t * p.delta + count) / (2 * count);
  }
  return p;
}

MaskPlane QuantizedImage::presence_mask() const {
  MaskPlane mask(levels.rows(), levels.cols());
  for (int r = 0; r < height(); ++r) {
    for (int c = 0; c < width(); ++c) mask(r, c) = present(r, c);
  }
  return mask;
}

QuantizedImage microshift_quantize(const ImagePlane& plane, const CodecParams& params) {
  QuantizedImage q;
  q.params = params;
  q.received = params.num_subimages();
  q.levels.resize(plane.rows(), plane.cols());
  for (Eigen::Index r = 0; r < plane.rows(); ++r) {
    for (Eigen::Index c = 0; c < plane.cols(); ++c) {
      const int shift = params.shift_at(static_cast<int>(r), static_cast<int>(c));
      q.levels(r, c) = static_cast<std::uint8_t>(shifted_level(plane(r, c), shift, params));
    }
  }
  return q;
}

UncertaintyInterval uncertainty_of(int level, int shift, const CodecParams& params) {
  return {(level * params.delta - shift) & 0xFF, params.delta};
}

std::optional<UncertaintyInterval> intersect(const UncertaintyInterval& a,
                                             const UncertaintyInterval& b) {
  const int b_from_a = (b.lo - a.lo) & 0xFF;
  if (b_from_a < a.width) {
    return UncertaintyInterval{b.lo, std::min(a.width - b_from_a, b.width)};
  }
  const int a_from_b = (a.lo - b.lo) & 0xFF;
  if (a_from_b < b.width) {
    return UncertaintyInterval{a.lo, std::min(b.width - a_from_b, a.width)};
  }
  return std::nullopt;
}

Estimate heuristic_estimate(std::span<const Observation> observations, const CodecParams& params) {
  if (observations.empty()) throw std::invalid_argument("heuristic_estimate: no observations");
  UncertaintyInterval running =
      uncertainty_of(observations.front().level, observations.front().shift, params);
  for (const auto& obs : observations.subspan(1)) {
    if (running.width == 1) break;
    if (auto next = intersect(running, uncertainty_of(obs.level, obs.shift, params))) {
      running = *next;
    }
  }
  return {running.midpoint(), running};
}

std::vector<Offset> sort_by_distance(std::vector<Offset> offsets) {
  std::stable_sort(offsets.begin(), offsets.end(), [](const Offset& a, const Offset& b) {
    const int da = a.dr * a.dr + a.dc * a.dc;
    const int db = b.dr * b.dr + b.dc * b.dc;
    if (da != db) return da < db;
    if (a.dr != b.dr) return a.dr < b.dr;
    return a.dc < b.dc;
  });
  return offsets;
}

}  // namespace microshift

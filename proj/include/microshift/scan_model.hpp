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

#include <vector>

#include "microshift/context_model.hpp"
#include "microshift/core.hpp"

namespace microshift {

// Geometry shared by the encoder and the lossless decoder: subimage-local
// causal templates and the same-block observations used for inter prediction.
class ScanModel {
 public:
  ScanModel(int width, int height, const CodecParams& params);

  int width() const { return width_; }
  int height() const { return height_; }

  // `level(row, col)` must return already-coded levels in image coordinates.
  template <typename LevelAt>
  CausalTemplate causal_template(int row, int col, LevelAt&& level) const {
    const int n = params_.side;
    const int pr = row % n;
    const int pc = col % n;
    return gather_template(row / n, col / n, sub_width_[pc], params_.mid_level(),
                           [&](int sr, int sc) { return level(sr * n + pr, sc * n + pc); });
  }

  // Same-block samples of earlier subimages, nearest first.
  template <typename LevelAt>
  std::vector<Observation> block_observations(int row, int col, LevelAt&& level) const {
    const int n = params_.side;
    const auto& offsets = block_offsets_[params_.pattern_index(row, col)];
    std::vector<Observation> obs;
    obs.reserve(offsets.size());
    for (const Offset& o : offsets) {
      const int r = row + o.dr;
      const int c = col + o.dc;
      if (c >= width_) continue;
      obs.push_back({level(r, c), params_.shifts[(r % n) * n + (c % n)]});
    }
    return obs;
  }

 private:
  int width_;
  int height_;
  CodecParams params_;
  std::vector<int> sub_width_;                   // per column phase
  std::vector<std::vector<Offset>> block_offsets_;  // per pattern position
};

}  // namespace microshift

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

#include "microshift/scan_model.hpp"

namespace microshift {

ScanModel::ScanModel(int width, int height, const CodecParams& params)
    : width_(width), height_(height), params_(params) {
  const int n = params.side;
  sub_width_.resize(n);
  for (int pc = 0; pc < n; ++pc) sub_width_[pc] = (width - pc + n - 1) / n;
  block_offsets_.resize(n * n);
  for (int t = 0; t < n * n; ++t) {
    std::vector<Offset> offsets;
    for (int earlier = 0; earlier < t; ++earlier) {
      offsets.push_back({earlier / n - t / n, earlier % n - t % n});
    }
    block_offsets_[t] = sort_by_distance(std::move(offsets));
  }
}

}  // namespace microshift

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

#include "microshift/container.hpp"
#include "microshift/context_model.hpp"
#include "microshift/core.hpp"

namespace microshift {

struct DecodedLevels {
  std::vector<QuantizedImage> planes;
  // The container was produced with a different predictor table. Decoding
  // proceeds, but the levels are unlikely to be correct.
  bool table_mismatch = false;
};

// Reconstructs subimages 1..received of every plane. Throws
// std::invalid_argument for received outside [1, N²] and TruncatedStream when
// a stream ends early.
DecodedLevels decode_levels(const CompressedContainer& container, const PredictorTable& table,
                            int received);

inline DecodedLevels decode_levels(const CompressedContainer& container, const PredictorTable& table) {
  return decode_levels(container, table, container.params.num_subimages());
}

}  // namespace microshift

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

#include "microshift/context_model.hpp"

namespace microshift {

// Table for M = 3, trained on the corpus under data/train (see scripts/).
const PredictorTable& default_table() {
  static const PredictorTable table = [] {
    PredictorTable t;
    t.bits = 3;
    t.clamp = kTextureClamp;
    t.entries = {
#include "default_table.inc"
    };
    return t;
  }();
  return table;
}

}  // namespace microshift

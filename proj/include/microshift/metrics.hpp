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

#include <cmath>
#include <string>

#include "microshift/container.hpp"
#include "microshift/context_model.hpp"
#include "microshift/core.hpp"
#include "microshift/image.hpp"

namespace microshift {

inline constexpr double kPsnrCap = 99.0;

// Throws std::invalid_argument on a size mismatch.
double psnr(const ImagePlane& a, const ImagePlane& b);

// Mean of the local SSIM map over every pixel: 11×11 Gaussian window with
// σ = 1.5 and mirrored borders. Both sides must be at least 11.
double ssim(const ImagePlane& a, const ImagePlane& b);

// Payload bits per source sample; header and length prefixes excluded.
double bpp(const CompressedContainer& c);

enum class Predictor { kIntra, kMed };

// Shannon entropy of the mapped residues of subimage 1, scaled by the share
// of the image that subimage covers.
double residue_entropy(const ImagePlane& plane, Predictor predictor, const CodecParams& params,
                       const PredictorTable& table);

// Entropy in bits of a histogram.
template <typename Counts>
double entropy_bits(const Counts& counts) {
  double total = 0;
  for (auto n : counts) total += static_cast<double>(n);
  if (total == 0) return 0.0;
  double h = 0;
  for (auto n : counts) {
    if (n > 0) {
      const double p = static_cast<double>(n) / total;
      h -= p * std::log2(p);
    }
  }
  return h;
}

// "key=value" with enough digits to round-trip the report.
std::string metric_line(const std::string& key, double value);

}  // namespace microshift

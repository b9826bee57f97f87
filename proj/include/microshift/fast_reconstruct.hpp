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

#include <Eigen/Core>

#include "microshift/core.hpp"
#include "microshift/image.hpp"

namespace microshift {

struct WlsParams {
  int iterations = 8;
  double lambda = 1.0;
  double sigma_color = 25.0;
};

void validate(const WlsParams& p);

// Estimates every present pixel from the present samples of the N×N block
// it belongs to, nearest first. Absent pixels are left at zero.
// Throws std::invalid_argument when no subimage is present.
ImagePlane heuristic_decode(const QuantizedImage& q);

// Fills absent pixels separably: each row holding present samples is
// linearly interpolated between its nearest present neighbors, then rows
// without samples are interpolated between the nearest filled rows. Values
// beyond the outermost samples copy the nearest one.
ImagePlane fill_absent(const ImagePlane& values, const QuantizedImage& q);

// Solves (I + λ·L_w) u = f in place for one line, where L_w is the 1-D
// Laplacian with coupling weights[i] between samples i and i + 1.
template <typename Line, typename Weights>
void solve_weighted_line(Line&& f, const Weights& weights, double lambda, Eigen::ArrayXd& scratch) {
  const Eigen::Index n = f.size();
  if (n < 2) return;
  scratch.resize(n);
  auto lower = [&](Eigen::Index i) { return i == 0 ? 0.0 : -lambda * weights(i - 1); };
  auto upper = [&](Eigen::Index i) { return i + 1 == n ? 0.0 : -lambda * weights(i); };

  double denom = 1.0 - upper(0);
  scratch(0) = upper(0) / denom;
  f(0) = f(0) / denom;
  for (Eigen::Index i = 1; i < n; ++i) {
    const double a = lower(i);
    const double c = upper(i);
    denom = (1.0 - a - c) - a * scratch(i - 1);
    scratch(i) = c / denom;
    f(i) = (f(i) - a * f(i - 1)) / denom;
  }
  for (Eigen::Index i = n - 2; i >= 0; --i) f(i) -= scratch(i) * f(i + 1);
}

// Iterated separable WLS smoothing guided by `guide`; iteration t of T uses
// λ_t = 1.5·λ·4^(T−t)/(4^T − 1). The result is clamped and rounded once.
PlaneXd wls_smooth_raw(const PlaneXd& img, const ImagePlane& guide, const WlsParams& p);
ImagePlane wls_smooth(const ImagePlane& img, const ImagePlane& guide, const WlsParams& p);

// Heuristic decode followed by WLS smoothing; requires every subimage.
ImagePlane fast_decode(const QuantizedImage& q, const WlsParams& p);

// Heuristic decode of the received subimages with absent pixels filled in.
ImagePlane progressive_initial(const QuantizedImage& q);

ImagePlane progressive_fast(const QuantizedImage& q, const WlsParams& p);

}  // namespace microshift

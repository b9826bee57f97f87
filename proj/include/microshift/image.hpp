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
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace microshift {

// Row-major dense plane; rows() is the image height, cols() the width.
template <typename Scalar>
using Plane = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using ImagePlane = Plane<std::uint8_t>;
using LevelPlane = Plane<std::uint8_t>;
using MaskPlane = Plane<bool>;
using PlaneXd = Plane<double>;

inline constexpr int kMaxDimension = 65535;

enum class ImageKind { kGray, kRgb };

struct MultiPlaneImage {
  ImageKind kind = ImageKind::kGray;
  std::vector<ImagePlane> planes;

  int width() const { return planes.empty() ? 0 : static_cast<int>(planes.front().cols()); }
  int height() const { return planes.empty() ? 0 : static_cast<int>(planes.front().rows()); }

  static MultiPlaneImage gray(ImagePlane plane);
  static MultiPlaneImage rgb(ImagePlane r, ImagePlane g, ImagePlane b);
};

// Throws std::invalid_argument if the plane count does not match the kind, the
// planes disagree in size, or a dimension is outside [1, kMaxDimension].
void validate(const MultiPlaneImage& img);

template <typename Derived>
ImagePlane to_image(const Eigen::ArrayBase<Derived>& values) {
  return values.round().max(0.0).min(255.0).template cast<std::uint8_t>();
}

template <typename Derived>
PlaneXd to_double(const Eigen::ArrayBase<Derived>& plane) {
  return plane.template cast<double>();
}

}  // namespace microshift

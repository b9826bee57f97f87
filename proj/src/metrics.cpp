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

#include "microshift/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <vector>

#include "microshift/residue_coding.hpp"

namespace microshift {

namespace {

void require_same_shape(const ImagePlane& a, const ImagePlane& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument(std::string(what) + ": image dimensions differ");
  }
}

// Mirror index into [0, n) with the edge sample repeated (d c b a | a b c d).
Eigen::Index mirror(Eigen::Index i, Eigen::Index n) {
  const Eigen::Index period = 2 * n;
  i %= period;
  if (i < 0) i += period;
  return i < n ? i : period - 1 - i;
}

PlaneXd gaussian_blur(const PlaneXd& img) {
  constexpr int kRadius = 5;
  constexpr double kSigma = 1.5;
  std::array<double, 2 * kRadius + 1> taps;
  double sum = 0;
  for (int k = -kRadius; k <= kRadius; ++k) {
    taps[k + kRadius] = std::exp(-0.5 * k * k / (kSigma * kSigma));
    sum += taps[k + kRadius];
  }
  for (double& t : taps) t /= sum;

  const Eigen::Index h = img.rows();
  const Eigen::Index w = img.cols();
  PlaneXd tmp(h, w);
  for (Eigen::Index r = 0; r < h; ++r) {
    for (Eigen::Index c = 0; c < w; ++c) {
      double acc = 0;
      for (int k = -kRadius; k <= kRadius; ++k) acc += taps[k + kRadius] * img(r, mirror(c + k, w));
      tmp(r, c) = acc;
    }
  }
  PlaneXd out(h, w);
  for (Eigen::Index r = 0; r < h; ++r) {
    for (Eigen::Index c = 0; c < w; ++c) {
      double acc = 0;
      for (int k = -kRadius; k <= kRadius; ++k) acc += taps[k + kRadius] * tmp(mirror(r + k, h), c);
      out(r, c) = acc;
    }
  }
  return out;
}

}  // namespace

double psnr(const ImagePlane& a, const ImagePlane& b) {
  require_same_shape(a, b, "psnr");
  if (a.size() == 0) throw std::invalid_argument("psnr: empty image");
  const double mse = (to_double(a) - to_double(b)).square().mean();
  if (mse == 0) return kPsnrCap;
  return std::min(kPsnrCap, 10.0 * std::log10(255.0 * 255.0 / mse));
}

double ssim(const ImagePlane& a, const ImagePlane& b) {
  require_same_shape(a, b, "ssim");
  if (a.rows() < 11 || a.cols() < 11) throw std::invalid_argument("ssim: image smaller than 11x11");
  constexpr double kC1 = (0.01 * 255) * (0.01 * 255);
  constexpr double kC2 = (0.03 * 255) * (0.03 * 255);
  const PlaneXd x = to_double(a);
  const PlaneXd y = to_double(b);
  const PlaneXd mx = gaussian_blur(x);
  const PlaneXd my = gaussian_blur(y);
  const PlaneXd sxx = gaussian_blur(x * x) - mx * mx;
  const PlaneXd syy = gaussian_blur(y * y) - my * my;
  const PlaneXd sxy = gaussian_blur(x * y) - mx * my;
  const PlaneXd map = ((2 * mx * my + kC1) * (2 * sxy + kC2)) /
                      ((mx * mx + my * my + kC1) * (sxx + syy + kC2));
  return map.mean();
}

double bpp(const CompressedContainer& c) {
  const double samples = static_cast<double>(c.width) * c.height * c.planes();
  if (samples == 0) return 0.0;
  return 8.0 * static_cast<double>(c.payload_bytes()) / samples;
}

double residue_entropy(const ImagePlane& plane, Predictor predictor, const CodecParams& params,
                       const PredictorTable& table) {
  if (plane.size() == 0) return 0.0;
  const QuantizedImage q = microshift_quantize(plane, params);
  const int n = params.side;
  const int sub_h = (q.height() + n - 1) / n;
  const int sub_w = (q.width() + n - 1) / n;
  auto at = [&](int sr, int sc) { return static_cast<int>(q.levels(sr * n, sc * n)); };

  std::vector<long> counts(params.num_levels(), 0);
  for (int sr = 0; sr < sub_h; ++sr) {
    for (int sc = 0; sc < sub_w; ++sc) {
      const CausalTemplate t = gather_template(sr, sc, sub_w, params.mid_level(), at);
      const int xhat = predictor == Predictor::kIntra ? predict_intra(t, table)
                       : t.first                     ? params.mid_level()
                                                     : predict_med(t);
      ++counts[map_residue(at(sr, sc) - xhat, xhat, params.bits)];
    }
  }
  const double share = static_cast<double>(sub_h) * sub_w / static_cast<double>(plane.size());
  return entropy_bits(counts) * share;
}

std::string metric_line(const std::string& key, double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", value);
  return key + "=" + buf;
}

}  // namespace microshift

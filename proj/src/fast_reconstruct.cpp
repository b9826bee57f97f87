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

#include "microshift/fast_reconstruct.hpp"

#include <stdexcept>
#include <vector>

namespace microshift {

void validate(const WlsParams& p) {
  if (p.iterations < 1 || !(p.lambda > 0.0) || !(p.sigma_color > 0.0)) {
    throw std::invalid_argument("WLS parameters need iterations >= 1, lambda > 0 and sigma_color > 0");
  }
}

ImagePlane heuristic_decode(const QuantizedImage& q) {
  if (q.received < 1) throw std::invalid_argument("heuristic_decode: no subimage present");
  const CodecParams& params = q.params;
  const int n = params.side;
  // Offsets to the members of the pixel's own N×N block, per pattern position.
  std::vector<std::vector<Offset>> block(n * n);
  for (int pr = 0; pr < n; ++pr) {
    for (int pc = 0; pc < n; ++pc) {
      std::vector<Offset> offsets;
      for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) offsets.push_back({r - pr, c - pc});
      }
      block[pr * n + pc] = sort_by_distance(std::move(offsets));
    }
  }

  // Blocks cut by the right or bottom border are replaced by the last full
  // block inside the image, so border pixels still see every shift.
  auto origin = [n](int x, int extent) {
    const int o = x - x % n;
    return o + n > extent && extent >= n ? extent - n : o;
  };
  ImagePlane out = ImagePlane::Zero(q.height(), q.width());
  std::vector<Observation> obs;
  obs.reserve(n * n);
  std::vector<Offset> clipped;
  for (int r = 0; r < q.height(); ++r) {
    for (int c = 0; c < q.width(); ++c) {
      if (!q.present(r, c)) continue;
      const int br = origin(r, q.height());
      const int bc = origin(c, q.width());
      const std::vector<Offset>* offsets = &block[params.pattern_index(r, c)];
      if (br != r - r % n || bc != c - c % n) {
        clipped.clear();
        for (int rr = br; rr < br + n; ++rr) {
          for (int cc = bc; cc < bc + n; ++cc) clipped.push_back({rr - r, cc - c});
        }
        clipped = sort_by_distance(std::move(clipped));
        offsets = &clipped;
      }
      obs.clear();
      for (const Offset& o : *offsets) {
        const int rr = r + o.dr;
        const int cc = c + o.dc;
        if (rr >= q.height() || cc >= q.width() || !q.present(rr, cc)) continue;
        obs.push_back({q.levels(rr, cc), params.shift_at(rr, cc)});
      }
      out(r, c) = static_cast<std::uint8_t>(heuristic_estimate(obs, params).value);
    }
  }
  return out;
}

namespace {

// Linear fill of the entries of `line` not flagged in `known`.
template <typename Line, typename Known>
void fill_line(Line&& line, const Known& known) {
  const Eigen::Index n = line.size();
  Eigen::Index prev = -1;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!known(i)) continue;
    for (Eigen::Index k = prev + 1; k < i; ++k) {
      if (prev < 0) {
        line(k) = line(i);
      } else {
        const double w = static_cast<double>(k - prev) / static_cast<double>(i - prev);
        line(k) = (1.0 - w) * line(prev) + w * line(i);
      }
    }
    prev = i;
  }
  if (prev < 0) return;
  for (Eigen::Index k = prev + 1; k < n; ++k) line(k) = line(prev);
}

// Linear fill along rows then columns, or columns then rows.
PlaneXd separable_fill(const PlaneXd& values, const MaskPlane& mask) {
  PlaneXd work = values;
  Eigen::Array<bool, Eigen::Dynamic, 1> row_known(work.rows());
  for (Eigen::Index r = 0; r < work.rows(); ++r) {
    row_known(r) = mask.row(r).any();
    if (row_known(r)) fill_line(work.row(r), mask.row(r));
  }
  for (Eigen::Index c = 0; c < work.cols(); ++c) fill_line(work.col(c), row_known);
  return work;
}

}  // namespace

ImagePlane fill_absent(const ImagePlane& values, const QuantizedImage& q) {
  if (q.received >= q.params.num_subimages()) return values;
  const MaskPlane mask = q.presence_mask();
  const PlaneXd v = values.cast<double>();
  // Both orders agree on a regular lattice (plain bilinear); on irregular
  // masks the average avoids favoring one direction.
  const PlaneXd rows_first = separable_fill(v, mask);
  const PlaneXd cols_first = separable_fill(v.transpose(), mask.transpose()).transpose();
  return to_image((rows_first + cols_first) / 2);
}

PlaneXd wls_smooth_raw(const PlaneXd& img, const ImagePlane& guide, const WlsParams& p) {
  validate(p);
  if (img.rows() != guide.rows() || img.cols() != guide.cols()) {
    throw std::invalid_argument("wls_smooth: image and guide differ in size");
  }
  const Eigen::Index h = img.rows();
  const Eigen::Index w = img.cols();
  const PlaneXd g = guide.cast<double>();
  PlaneXd horizontal(h, std::max<Eigen::Index>(w - 1, 0));
  PlaneXd vertical(std::max<Eigen::Index>(h - 1, 0), w);
  if (w > 1) horizontal = (-(g.rightCols(w - 1) - g.leftCols(w - 1)).abs() / p.sigma_color).exp();
  if (h > 1) vertical = (-(g.bottomRows(h - 1) - g.topRows(h - 1)).abs() / p.sigma_color).exp();

  PlaneXd u = img;
  Eigen::ArrayXd scratch;
  const double norm = std::pow(4.0, p.iterations) - 1.0;
  for (int t = 1; t <= p.iterations; ++t) {
    const double lambda_t = 1.5 * p.lambda * std::pow(4.0, p.iterations - t) / norm;
    for (Eigen::Index r = 0; r < h; ++r) solve_weighted_line(u.row(r), horizontal.row(r), lambda_t, scratch);
    for (Eigen::Index c = 0; c < w; ++c) solve_weighted_line(u.col(c), vertical.col(c), lambda_t, scratch);
  }
  return u;
}

ImagePlane wls_smooth(const ImagePlane& img, const ImagePlane& guide, const WlsParams& p) {
  return to_image(wls_smooth_raw(img.cast<double>(), guide, p));
}

ImagePlane fast_decode(const QuantizedImage& q, const WlsParams& p) {
  if (q.received != q.params.num_subimages()) {
    throw std::invalid_argument("fast_decode: every subimage must be present");
  }
  return progressive_fast(q, p);
}

ImagePlane progressive_initial(const QuantizedImage& q) { return fill_absent(heuristic_decode(q), q); }

ImagePlane progressive_fast(const QuantizedImage& q, const WlsParams& p) {
  const ImagePlane init = progressive_initial(q);
  return wls_smooth(init, init, p);
}

}  // namespace microshift

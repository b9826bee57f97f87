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

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "microshift/container.hpp"
#include "microshift/context_model.hpp"
#include "microshift/image.hpp"
#include "microshift/residue_coding.hpp"
#include "microshift/scan_model.hpp"

namespace microshift {

// Yields the next image row, or nullopt once the source is exhausted. The
// encoder drops each row as soon as it has been quantized.
using RowProducer = std::function<std::optional<std::vector<std::uint8_t>>()>;

// Single-pass raster encoder for one plane. Only the last N + 1 rows of levels
// are retained, so the working set depends on the width alone.
class PlaneEncoder {
 public:
  PlaneEncoder(int width, int height, const CodecParams& params, const PredictorTable& table);

  void push_row(std::span<const std::uint8_t> row);
  // Flushes pending runs and returns the N² padded streams.
  std::vector<Bytes> finish();

  int rows_pushed() const { return next_row_; }
  // Bytes of level line buffers and coder state, excluding emitted payload.
  std::size_t working_set_bytes() const;

 private:
  struct Stream {
    BitWriter out;
    RiceState residue;
    RiceState run_lengths;
    RunState run;
  };

  int level(int row, int col) const;
  void encode_pixel(int row, int col);
  void end_runs_of_row(int row);

  int width_;
  int height_;
  CodecParams params_;
  PredictorTable table_;
  ScanModel model_;
  std::vector<std::uint8_t> line_buffer_;  // (N + 1) × width ring of levels
  int ring_rows_;
  std::vector<Stream> streams_;
  int next_row_ = 0;
};

std::vector<Bytes> encode_plane(const RowProducer& rows, int width, int height,
                                const CodecParams& params, const PredictorTable& table);
std::vector<Bytes> encode_plane(const ImagePlane& plane, const CodecParams& params,
                                const PredictorTable& table);

CompressedContainer encode_image(const MultiPlaneImage& img, const CodecParams& params,
                                 const PredictorTable& table);

}  // namespace microshift

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

#include "microshift/encoder.hpp"

#include <stdexcept>
#include <string>

namespace microshift {

PlaneEncoder::PlaneEncoder(int width, int height, const CodecParams& params, const PredictorTable& table)
    : width_(width),
      height_(height),
      params_(params),
      table_(table),
      model_(width, height, params),
      ring_rows_(params.side + 1),
      streams_(params.num_subimages()) {
  if (width < 1 || height < 1 || width > kMaxDimension || height > kMaxDimension) {
    throw std::invalid_argument("encoder: image dimensions out of range");
  }
  if (table.bits != params.bits) throw std::invalid_argument("encoder: predictor table trained for a different M");
  line_buffer_.resize(static_cast<std::size_t>(ring_rows_) * width);
}

int PlaneEncoder::level(int row, int col) const {
  return line_buffer_[static_cast<std::size_t>(row % ring_rows_) * width_ + col];
}

void PlaneEncoder::push_row(std::span<const std::uint8_t> row) {
  if (next_row_ >= height_) throw std::invalid_argument("encoder: more rows than the declared height");
  if (static_cast<int>(row.size()) != width_) {
    throw std::invalid_argument("encoder: row has " + std::to_string(row.size()) + " samples, expected " +
                                std::to_string(width_));
  }
  const int r = next_row_;
  std::uint8_t* dst = &line_buffer_[static_cast<std::size_t>(r % ring_rows_) * width_];
  for (int c = 0; c < width_; ++c) {
    dst[c] = static_cast<std::uint8_t>(shifted_level(row[c], params_.shift_at(r, c), params_));
  }
  for (int c = 0; c < width_; ++c) encode_pixel(r, c);
  end_runs_of_row(r);
  ++next_row_;
}

void PlaneEncoder::encode_pixel(int row, int col) {
  const int t = params_.pattern_index(row, col);
  Stream& s = streams_[t];
  auto at = [this](int r, int c) { return level(r, c); };
  const int x = level(row, col);
  const CausalTemplate tpl = model_.causal_template(row, col, at);
  const bool uniform = !tpl.first && is_uniform(texture_vector(tpl));

  if (s.run.active) {
    if (uniform && x == tpl.b) {
      ++s.run.length;
      return;
    }
    run_encode(s.out, s.run_lengths, s.run.length, false);
    s.run = {};
  } else if (uniform) {
    if (x == tpl.b) {
      s.run = {true, 1};
      return;
    }
    run_encode(s.out, s.run_lengths, 0, false);
  }

  const int xhat = t == 0 ? predict_intra(tpl, table_)
                          : predict_inter(model_.block_observations(row, col, at), params_.shifts[t], params_);
  const int code = map_residue(x - xhat, xhat, params_.bits);
  rice_encode(s.out, s.residue.k(), static_cast<std::uint32_t>(code));
  s.residue.update(code);
}

void PlaneEncoder::end_runs_of_row(int row) {
  const int n = params_.side;
  for (int pc = 0; pc < n; ++pc) {
    Stream& s = streams_[(row % n) * n + pc];
    if (!s.run.active) continue;
    run_encode(s.out, s.run_lengths, s.run.length, true);
    s.run = {};
  }
}

std::vector<Bytes> PlaneEncoder::finish() {
  if (next_row_ != height_) {
    throw std::invalid_argument("encoder: received " + std::to_string(next_row_) + " rows, expected " +
                                std::to_string(height_));
  }
  std::vector<Bytes> out;
  out.reserve(streams_.size());
  for (auto& s : streams_) out.push_back(s.out.finish());
  return out;
}

std::size_t PlaneEncoder::working_set_bytes() const {
  const std::size_t per_stream = sizeof(RiceState) * 2 + sizeof(RunState) + sizeof(std::uint32_t);
  return line_buffer_.size() + streams_.size() * per_stream;
}

std::vector<Bytes> encode_plane(const RowProducer& rows, int width, int height, const CodecParams& params,
                                const PredictorTable& table) {
  PlaneEncoder encoder(width, height, params, table);
  for (int r = 0; r < height; ++r) {
    std::optional<std::vector<std::uint8_t>> row = rows();
    if (!row) throw std::invalid_argument("encoder: row producer ended after " + std::to_string(r) + " rows");
    encoder.push_row(*row);
  }
  if (rows()) throw std::invalid_argument("encoder: row producer yields more rows than the declared height");
  return encoder.finish();
}

std::vector<Bytes> encode_plane(const ImagePlane& plane, const CodecParams& params, const PredictorTable& table) {
  const int width = static_cast<int>(plane.cols());
  const int height = static_cast<int>(plane.rows());
  PlaneEncoder encoder(width, height, params, table);
  for (int r = 0; r < height; ++r) {
    encoder.push_row(std::span<const std::uint8_t>(plane.row(r).data(), static_cast<std::size_t>(width)));
  }
  return encoder.finish();
}

CompressedContainer encode_image(const MultiPlaneImage& img, const CodecParams& params, const PredictorTable& table) {
  validate(img);
  CompressedContainer c;
  c.params = params;
  c.width = img.width();
  c.height = img.height();
  c.table_crc = table.checksum();
  for (const auto& plane : img.planes) c.streams.push_back(encode_plane(plane, params, table));
  return c;
}

}  // namespace microshift

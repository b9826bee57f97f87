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

#include "microshift/decoder.hpp"

#include <stdexcept>

#include "microshift/residue_coding.hpp"
#include "microshift/scan_model.hpp"

namespace microshift {

namespace {

struct StreamDecoder {
  BitReader in;
  RiceState residue;
  RiceState run_lengths;
  RunState run;
};

QuantizedImage decode_plane(const std::vector<Bytes>& streams, const CompressedContainer& c,
                            const PredictorTable& table, int received) {
  const CodecParams& params = c.params;
  const int n = params.side;
  QuantizedImage q;
  q.params = params;
  q.received = received;
  q.levels = LevelPlane::Zero(c.height, c.width);
  ScanModel model(c.width, c.height, params);

  std::vector<StreamDecoder> decoders;
  decoders.reserve(received);
  for (int j = 0; j < received; ++j) decoders.push_back({BitReader(streams[j]), {}, {}, {}});

  auto at = [&q](int r, int col) -> int { return q.levels(r, col); };
  for (int row = 0; row < c.height; ++row) {
    for (int col = 0; col < c.width; ++col) {
      const int t = params.pattern_index(row, col);
      if (t >= received) continue;
      StreamDecoder& s = decoders[t];
      const CausalTemplate tpl = model.causal_template(row, col, at);
      const bool uniform = !tpl.first && is_uniform(texture_vector(tpl));

      if (s.run.active) {
        if (s.run.length > 0) {
          if (!uniform) throw FormatError("decoder: run continues into a non-uniform context");
          q.levels(row, col) = static_cast<std::uint8_t>(tpl.b);
          --s.run.length;
          continue;
        }
        s.run = {};
      } else if (uniform) {
        const RunToken token = run_decode(s.in, s.run_lengths);
        const int remaining = (c.width - 1 - col) / n + 1;
        const int length = token.reaches_row_end ? remaining : token.length;
        if (length >= remaining && !token.reaches_row_end) throw FormatError("decoder: run crosses a row boundary");
        if (length > 0) {
          s.run = {true, length - 1};
          q.levels(row, col) = static_cast<std::uint8_t>(tpl.b);
          continue;
        }
      }

      const int xhat = t == 0 ? predict_intra(tpl, table)
                              : predict_inter(model.block_observations(row, col, at), params.shifts[t], params);
      const int code = static_cast<int>(rice_decode(s.in, s.residue.k()));
      if (code > params.max_level()) throw FormatError("decoder: residue code out of range");
      s.residue.update(code);
      q.levels(row, col) = static_cast<std::uint8_t>(xhat + unmap_residue(code, xhat, params.bits));
    }
    for (int pc = 0; pc < n; ++pc) {
      const int t = (row % n) * n + pc;
      if (t >= received) continue;
      if (decoders[t].run.length > 0) throw FormatError("decoder: run crosses a row boundary");
      decoders[t].run = {};
    }
  }
  return q;
}

}  // namespace

DecodedLevels decode_levels(const CompressedContainer& container, const PredictorTable& table, int received) {
  if (received < 1 || received > container.params.num_subimages()) {
    throw std::invalid_argument("decode_levels: subimage count must be in [1, N²]");
  }
  if (table.bits != container.params.bits) {
    throw std::invalid_argument("decode_levels: predictor table trained for a different M");
  }
  DecodedLevels out;
  out.table_mismatch = table.checksum() != container.table_crc;
  for (const auto& plane : container.streams) out.planes.push_back(decode_plane(plane, container, table, received));
  return out;
}

}  // namespace microshift

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

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iterator>
#include <stdexcept>

#include <zlib.h>

namespace microshift {

ContextId context_id(const TextureVector& v, int clamp) {
  if (clamp != kTextureClamp) throw std::invalid_argument("only texture clamp 2 is supported");
  TextureVector b;
  for (int i = 0; i < 4; ++i) b[i] = std::clamp(v[i], -clamp, clamp);
  int sign = 1;
  for (int x : b) {
    if (x == 0) continue;
    if (x < 0) sign = -1;
    break;
  }
  int raw = 0;
  for (int x : b) raw = raw * 5 + (sign * x + 2);
  return {raw - 312, sign};
}

std::uint32_t PredictorTable::checksum() const {
  return static_cast<std::uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef*>(entries.data()), static_cast<uInt>(entries.size())));
}

PredictorTable zero_table(int bits) {
  PredictorTable t;
  t.bits = bits;
  return t;
}

TableTrainer::TableTrainer(const CodecParams& params) : params_(params) {}

void TableTrainer::add_sample(const ContextId& ctx, int x_minus_b) {
  ++histogram_[ctx.index][ctx.sign * x_minus_b + kMaxDiff];
  ++samples_;
}

void TableTrainer::add(const ImagePlane& plane) {
  const QuantizedImage q = microshift_quantize(plane, params_);
  const int n = params_.side;
  const int sub_h = (q.height() + n - 1) / n;
  const int sub_w = (q.width() + n - 1) / n;
  auto at = [&](int sr, int sc) -> int { return q.levels(sr * n, sc * n); };
  for (int sr = 0; sr < sub_h; ++sr) {
    for (int sc = 0; sc < sub_w; ++sc) {
      const CausalTemplate t = gather_template(sr, sc, sub_w, params_.mid_level(), at);
      if (t.first) continue;
      add_sample(context_id(texture_vector(t)), at(sr, sc) - t.b);
    }
  }
}

PredictorTable TableTrainer::finish() const {
  PredictorTable table = zero_table(params_.bits);
  for (int l = 0; l < kNumContexts; ++l) {
    const auto& h = histogram_[l];
    int best = 0;
    for (int mag = 1; mag <= kMaxDiff; ++mag) {
      for (int value : {mag, -mag}) {
        if (h[value + kMaxDiff] > h[best + kMaxDiff]) best = value;
      }
    }
    table.entries[l] = static_cast<std::int8_t>(best);
  }
  return table;
}

PredictorTable train_table(std::span<const ImagePlane> corpus, const CodecParams& params) {
  if (corpus.empty()) throw std::invalid_argument("training corpus is empty");
  TableTrainer trainer(params);
  for (const auto& plane : corpus) trainer.add(plane);
  return trainer.finish();
}

int predict_intra(const CausalTemplate& t, const PredictorTable& table) {
  const int max_level = (1 << table.bits) - 1;
  if (t.first) return 1 << (table.bits - 1);
  const ContextId ctx = context_id(texture_vector(t), table.clamp);
  return std::clamp(t.b + ctx.sign * table.entries[ctx.index], 0, max_level);
}

int predict_med(const CausalTemplate& t) {
  if (t.c >= std::max(t.a, t.b)) return std::min(t.a, t.b);
  if (t.c <= std::min(t.a, t.b)) return std::max(t.a, t.b);
  return t.a + t.b - t.c;
}

int predict_inter(std::span<const Observation> block_obs, int target_shift, const CodecParams& params) {
  const Estimate est = heuristic_estimate(block_obs, params);
  return shifted_level(est.value, target_shift, params);
}

namespace {

void put_u16(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

void put_u32(std::string& out, std::uint32_t v) {
  put_u16(out, v & 0xFFFF);
  put_u16(out, v >> 16);
}

std::uint32_t get_le(const std::string& bytes, std::size_t pos, int width) {
  std::uint32_t v = 0;
  for (int i = width - 1; i >= 0; --i) v = (v << 8) | static_cast<std::uint8_t>(bytes[pos + i]);
  return v;
}

}  // namespace

std::string serialize_table(const PredictorTable& table) {
  std::string out = "MSHD";
  out.push_back(1);
  out.push_back(static_cast<char>(table.bits));
  out.push_back(static_cast<char>(table.clamp));
  put_u16(out, kNumContexts);
  for (std::int8_t e : table.entries) out.push_back(static_cast<char>(e));
  put_u32(out, table.checksum());
  return out;
}

PredictorTable parse_table(const std::string& bytes) {
  constexpr std::size_t kSize = 4 + 3 + 2 + kNumContexts + 4;
  if (bytes.size() < 9 || bytes.compare(0, 4, "MSHD") != 0) {
    throw FormatError("predictor table: bad magic");
  }
  if (bytes[4] != 1) throw FormatError("predictor table: unsupported version");
  if (get_le(bytes, 7, 2) != kNumContexts) throw FormatError("predictor table: entry count must be 313");
  if (bytes.size() != kSize) throw FormatError("predictor table: wrong file size");
  PredictorTable table;
  table.bits = bytes[5];
  table.clamp = bytes[6];
  if (table.bits < 2 || table.bits > 4 || table.clamp != kTextureClamp) {
    throw FormatError("predictor table: unsupported M or T");
  }
  const int max_level = (1 << table.bits) - 1;
  for (int i = 0; i < kNumContexts; ++i) {
    table.entries[i] = static_cast<std::int8_t>(bytes[9 + i]);
    if (std::abs(table.entries[i]) > max_level) throw FormatError("predictor table: entry out of range");
  }
  if (get_le(bytes, 9 + kNumContexts, 4) != table.checksum()) {
    throw FormatError("predictor table: CRC mismatch");
  }
  return table;
}

PredictorTable read_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return parse_table(std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>()));
}

void write_table(const PredictorTable& table, const std::filesystem::path& path) {
  const std::string bytes = serialize_table(table);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace microshift

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

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>

#include "microshift/core.hpp"

namespace microshift {

inline constexpr int kTextureClamp = 2;
inline constexpr int kNumContexts = 313;

// Levels of the causal neighbors of X inside one subimage:
//   C B D
// E A X
// `first` marks the first sample of the subimage, which has no neighbors.
struct CausalTemplate {
  int a = 0;
  int b = 0;
  int c = 0;
  int d = 0;
  int e = 0;
  bool first = false;
};

// Gathers the template at subimage coordinates (sr, sc). `at(sr, sc)` returns
// an already-coded level. Missing left neighbors copy B, missing above-row
// neighbors copy A; the first sample gets every neighbor at `mid_level`.
template <typename LevelAt>
CausalTemplate gather_template(int sr, int sc, int sub_width, int mid_level, LevelAt&& at) {
  const bool has_left = sc >= 1;
  const bool has_up = sr >= 1;
  CausalTemplate t;
  if (!has_left && !has_up) {
    t.a = t.b = t.c = t.d = t.e = mid_level;
    t.first = true;
    return t;
  }
  if (has_up) t.b = at(sr - 1, sc);
  if (has_left) t.a = at(sr, sc - 1);
  if (!has_left) t.a = t.b;
  if (!has_up) t.b = t.a;
  t.c = has_left && has_up ? at(sr - 1, sc - 1) : (has_left ? t.a : t.b);
  t.d = has_up && sc + 1 < sub_width ? at(sr - 1, sc + 1) : t.a;
  t.e = sc >= 2 ? at(sr, sc - 2) : t.b;
  return t;
}

using TextureVector = std::array<int, 4>;

// (A − C, C − B, D − A, B − E) in level units.
inline TextureVector texture_vector(const CausalTemplate& t) {
  return {t.a - t.c, t.c - t.b, t.d - t.a, t.b - t.e};
}

struct ContextId {
  int index = 0;
  int sign = 1;

  friend bool operator==(const ContextId&, const ContextId&) = default;
};

// Clamps each component to [−clamp, clamp] and merges v with −v. Only
// clamp == 2 (313 contexts) is supported.
ContextId context_id(const TextureVector& v, int clamp = kTextureClamp);

inline bool is_uniform(const TextureVector& v) { return v == TextureVector{0, 0, 0, 0}; }

// Learned most-probable X − B per merged context.
struct PredictorTable {
  int bits = 3;
  int clamp = kTextureClamp;
  std::array<std::int8_t, kNumContexts> entries{};

  std::uint32_t checksum() const;

  friend bool operator==(const PredictorTable&, const PredictorTable&) = default;
};

PredictorTable zero_table(int bits);

// The table shipped with the library, trained for M = 3.
const PredictorTable& default_table();

// Histogram of sign·(X − B) per context over subimage 1 of every plane;
// argmax with ties going to the smallest magnitude, then to the positive value.
// Throws std::invalid_argument on an empty corpus.
PredictorTable train_table(std::span<const ImagePlane> corpus, const CodecParams& params);

// Training accumulator, exposed so callers can fold images one at a time.
class TableTrainer {
 public:
  explicit TableTrainer(const CodecParams& params);

  void add(const ImagePlane& plane);
  void add_sample(const ContextId& ctx, int x_minus_b);
  int samples() const { return samples_; }
  PredictorTable finish() const;

 private:
  static constexpr int kMaxDiff = 15;
  CodecParams params_;
  std::array<std::array<int, 2 * kMaxDiff + 1>, kNumContexts> histogram_{};
  int samples_ = 0;
};

int predict_intra(const CausalTemplate& t, const PredictorTable& table);

// Median edge detector on the same template (A left, B above, C above-left).
int predict_med(const CausalTemplate& t);

// Heuristic decode of already-coded same-block samples, re-shifted and
// quantized with the target shift.
int predict_inter(std::span<const Observation> block_obs, int target_shift, const CodecParams& params);

// Table file: "MSHD", version 1, M, T, u16 count, count signed bytes, CRC-32.
std::string serialize_table(const PredictorTable& table);
PredictorTable parse_table(const std::string& bytes);
PredictorTable read_table(const std::filesystem::path& path);
void write_table(const PredictorTable& table, const std::filesystem::path& path);

}  // namespace microshift

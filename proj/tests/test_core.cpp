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

#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "doctest.h"
#include "microshift/core.hpp"
#include "test_support.hpp"

using namespace microshift;

namespace {

// Brute-force reference: intervals as explicit sets on the circle.
std::set<int> as_set(const UncertaintyInterval& u) {
  std::set<int> s;
  for (int i = 0; i < u.width; ++i) s.insert((u.lo + i) & 0xFF);
  return s;
}

int reference_estimate(const std::vector<Observation>& obs, const CodecParams& p) {
  std::set<int> s = as_set(uncertainty_of(obs[0].level, obs[0].shift, p));
  for (std::size_t i = 1; i < obs.size(); ++i) {
    const std::set<int> t = as_set(uncertainty_of(obs[i].level, obs[i].shift, p));
    std::set<int> both;
    for (int v : s) {
      if (t.count(v)) both.insert(v);
    }
    if (!both.empty()) s = both;
  }
  // Lower median of the survivors as plain intensities.
  const std::vector<int> sorted(s.begin(), s.end());
  return sorted[(sorted.size() - 1) / 2];
}

}  // namespace

TEST_CASE("shift table for (3,3)") {
  const CodecParams p = make_params(3, 3);
  CHECK(p.delta == 32);
  CHECK(p.shifts == std::vector<int>{0, 4, 7, 11, 14, 18, 21, 25, 28});
  CHECK(p == default_params());
}

TEST_CASE("shift tables follow round-half-up of t·Δ/N²") {
  for (int m = 2; m <= 4; ++m) {
    for (int n = 3; n <= 4; ++n) {
      const CodecParams p = make_params(m, n);
      CHECK(p.delta == 256 / (1 << m));
      REQUIRE(static_cast<int>(p.shifts.size()) == n * n);
      CHECK(p.shifts[0] == 0);
      for (int t = 0; t < n * n; ++t) {
        CHECK(p.shifts[t] == static_cast<int>(std::floor(t * double(p.delta) / (n * n) + 0.5)));
        CHECK(p.shifts[t] <= p.delta);
        if (t > 0) CHECK(p.shifts[t] > p.shifts[t - 1]);
      }
    }
  }
  CHECK(make_params(2, 3).shifts[1] == 7);
  CHECK(make_params(2, 3).delta == 64);
}

TEST_CASE("out of range parameters") {
  CHECK_THROWS_AS(make_params(3, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_params(5, 3), std::invalid_argument);
  CHECK_THROWS_AS(make_params(1, 3), std::invalid_argument);
}

TEST_CASE("quantize_level is floor division and monotone") {
  const CodecParams p = default_params();
  CHECK(quantize_level(0, p) == 0);
  CHECK(quantize_level(31, p) == 0);
  CHECK(quantize_level(32, p) == 1);
  CHECK(quantize_level(255, p) == 7);
  for (int v = 1; v < 256; ++v) CHECK(quantize_level(v, p) >= quantize_level(v - 1, p));
}

TEST_CASE("microshift_quantize wraps modulo 256") {
  const CodecParams p = default_params();
  ImagePlane img = ImagePlane::Zero(3, 3);
  img(1, 1) = 100;  // t = 4, δ = 14
  img(2, 2) = 250;  // t = 8, δ = 28
  const QuantizedImage q = microshift_quantize(img, p);
  CHECK(q.levels(1, 1) == 3);
  CHECK(q.levels(2, 2) == 0);
  CHECK(q.levels(0, 0) == 0);
  CHECK(q.received == 9);
  std::mt19937 rng(3);
  const ImagePlane r = testing::random_plane(rng, 17, 23);
  const QuantizedImage qr = microshift_quantize(r, make_params(4, 4));
  for (int y = 0; y < 17; ++y) {
    for (int x = 0; x < 23; ++x) {
      const int t = (y % 4) * 4 + x % 4;
      CHECK(qr.levels(y, x) == ((r(y, x) + qr.params.shifts[t]) % 256) / 16);
    }
  }
}

TEST_CASE("subimage indices") {
  CHECK(subimage_of(0, 0, 3) == 1);
  CHECK(subimage_of(1, 2, 3) == 6);
  CHECK(subimage_of(3, 3, 3) == 1);
  const CodecParams p = default_params();
  for (int r = 0; r < 6; ++r) {
    for (int c = 0; c < 6; ++c) CHECK(p.shift_at(r, c) == p.shifts[subimage_of(r, c, 3) - 1]);
  }
}

TEST_CASE("presence mask follows received count") {
  QuantizedImage q = microshift_quantize(ImagePlane::Zero(4, 4), default_params());
  q.received = 2;
  const MaskPlane m = q.presence_mask();
  CHECK(m(0, 0));
  CHECK(m(0, 1));
  CHECK_FALSE(m(0, 2));
  CHECK_FALSE(m(1, 0));
  CHECK(m(3, 3));
}

TEST_CASE("uncertainty intervals") {
  const CodecParams p = default_params();
  CHECK(uncertainty_of(2, 4, p) == UncertaintyInterval{60, 32});
  CHECK(uncertainty_of(0, 28, p) == UncertaintyInterval{228, 32});
  CHECK(uncertainty_of(0, 0, p) == UncertaintyInterval{0, 32});
  // Every value lies in the interval of its own level.
  for (int v = 0; v < 256; ++v) {
    for (int s : p.shifts) CHECK(uncertainty_of(shifted_level(v, s, p), s, p).contains(v));
  }
}

TEST_CASE("circular intersection matches set intersection") {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> lo(0, 255), w(1, 128);
  for (int i = 0; i < 5000; ++i) {
    const UncertaintyInterval a{lo(rng), w(rng)}, b{lo(rng), w(rng)};
    std::set<int> both;
    for (int v : as_set(a)) {
      if (b.contains(v)) both.insert(v);
    }
    const auto got = intersect(a, b);
    if (both.empty()) {
      CHECK_FALSE(got.has_value());
    } else {
      REQUIRE(got.has_value());
      CHECK(as_set(*got) == both);
    }
  }
}

TEST_CASE("heuristic estimate examples") {
  const CodecParams p = default_params();
  std::vector<Observation> block;
  for (int s : p.shifts) block.push_back({shifted_level(70, s, p), s});
  const Estimate e = heuristic_estimate(block, p);
  CHECK(e.interval == UncertaintyInterval{68, 3});
  CHECK(e.value == 69);

  const std::vector<Observation> one{{2, 0}};
  CHECK(heuristic_estimate(one, p).value == 79);
  CHECK(heuristic_estimate(one, p).interval == UncertaintyInterval{64, 32});

  const std::vector<Observation> disjoint{{0, 0}, {4, 0}};
  CHECK(heuristic_estimate(disjoint, p).value == 15);

  // Survivors {252..255, 0..27}: the low piece is larger.
  const std::vector<Observation> wrapped{{0, 4}};
  CHECK(heuristic_estimate(wrapped, p).value == 15);
  // Survivors {228..255, 0..3}: the high piece is larger.
  CHECK(heuristic_estimate(std::vector<Observation>{{0, 28}}, p).value == 239);

  CHECK_THROWS_AS(heuristic_estimate(std::vector<Observation>{}, p), std::invalid_argument);
}

TEST_CASE("heuristic estimate agrees with the set-based reference") {
  std::mt19937 rng(5);
  for (int m = 2; m <= 4; ++m) {
    const CodecParams p = make_params(m, 3);
    std::uniform_int_distribution<int> lvl(0, p.max_level()), sh(0, 8), len(1, 9);
    for (int i = 0; i < 3000; ++i) {
      std::vector<Observation> obs(len(rng));
      for (auto& o : obs) o = {lvl(rng), p.shifts[sh(rng)]};
      const Estimate e = heuristic_estimate(obs, p);
      CHECK(e.value == reference_estimate(obs, p));
      CHECK(uncertainty_of(obs[0].level, obs[0].shift, p).contains(e.value));
    }
  }
}

TEST_CASE("constant blocks are recovered within ceil(Δ/N²/2)+1") {
  for (int m = 2; m <= 4; ++m) {
    for (int n = 3; n <= 4; ++n) {
      const CodecParams p = make_params(m, n);
      const int bound = (p.delta + 2 * n * n - 1) / (2 * n * n) + 1;
      for (int v = 0; v < 256; ++v) {
        std::vector<Observation> obs;
        for (int s : p.shifts) obs.push_back({shifted_level(v, s, p), s});
        for (std::size_t first = 0; first < obs.size(); ++first) {
          std::vector<Observation> ordered = obs;
          std::swap(ordered[0], ordered[first]);
          CHECK(circular_distance(heuristic_estimate(ordered, p).value, v) <= bound);
        }
      }
    }
  }
}

TEST_CASE("offsets sort by length, ties row-major") {
  const auto s = sort_by_distance({{1, 1}, {0, 1}, {-1, 0}, {0, 0}, {1, 0}, {0, -1}, {-1, -1}});
  const std::vector<std::pair<int, int>> want{{0, 0}, {-1, 0}, {0, -1}, {0, 1}, {1, 0}, {-1, -1}, {1, 1}};
  REQUIRE(s.size() == want.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(s[i].dr == want[i].first);
    CHECK(s[i].dc == want[i].second);
  }
}

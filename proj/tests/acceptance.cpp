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

// Acceptance run: one PASS/FAIL line per criterion, exit status 0 only when
// every criterion passes. Expects MICROSHIFT_DATA_DIR/{test,train}.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "microshift/container.hpp"
#include "microshift/context_model.hpp"
#include "microshift/core.hpp"
#include "microshift/decoder.hpp"
#include "microshift/encoder.hpp"
#include "microshift/fast_reconstruct.hpp"
#include "microshift/max_flow.hpp"
#include "microshift/metrics.hpp"
#include "microshift/mrf.hpp"
#include "microshift/pixel_io.hpp"
#include "microshift/residue_coding.hpp"

using namespace microshift;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

fs::path data_dir() { return fs::path(MICROSHIFT_DATA_DIR); }

struct Named {
  std::string name;
  ImagePlane plane;
};

std::vector<Named> load_dir(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() == ".pgm") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<Named> out;
  for (const auto& f : files) out.push_back({f.stem().string(), read_image(f).planes[0]});
  return out;
}

double mean(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0) / v.size(); }

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  std::printf("criterion %2d %-4s %s: %s\n", id, pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

ImagePlane random_image(std::mt19937& rng) {
  std::uniform_int_distribution<int> side(1, 80), value(0, 255), kind(0, 2);
  const int h = side(rng), w = side(rng);
  ImagePlane p(h, w);
  const int k = kind(rng);
  const int base = value(rng);
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const int v = k == 0 ? value(rng) : k == 1 ? base + (r + c) / 3 + value(rng) % 5 : base;
      p(r, c) = static_cast<std::uint8_t>(v & 0xFF);
    }
  }
  return p;
}

// 1. Lossless stage.
void lossless_roundtrip(const std::vector<Named>& test) {
  std::mt19937 rng(2026);
  std::vector<ImagePlane> images;
  for (int i = 0; i < 50; ++i) images.push_back(random_image(rng));
  for (const auto& t : test) images.push_back(t.plane);
  const CodecParams p = default_params();
  bool exact = true;
  double worst = 0;
  for (const auto& img : images) {
    const auto t0 = Clock::now();
    const CompressedContainer c = parse_container(serialize_container(encode_image(MultiPlaneImage::gray(img), p, default_table())));
    const QuantizedImage got = decode_levels(c, default_table()).planes[0];
    worst = std::max(worst, seconds_since(t0));
    exact = exact && (got.levels == microshift_quantize(img, p).levels).all();
  }
  report(1, "lossless roundtrip", exact && worst < 1.0 && test.size() >= 10,
         std::to_string(images.size()) + " images (" + std::to_string(test.size()) + " standard), bit-exact=" +
             (exact ? "yes" : "no") + fmt(", slowest %.3f s", worst));
}

// 2. Shift table and first-stage ratio.
void shift_table() {
  const CodecParams p = make_params(3, 3);
  const std::vector<int> want{0, 4, 7, 11, 14, 18, 21, 25, 28};
  const bool shifts = std::vector<int>(p.shifts.begin(), p.shifts.end()) == want;
  const double cr1 = 8.0 / p.bits;
  report(2, "shift table and CR1", p.delta == 32 && shifts && cr1 == 8.0 / 3,
         "delta=" + std::to_string(p.delta) + " shifts " + (shifts ? "match" : "differ") + fmt(", CR1=%.3f", cr1));
}

// 3. Heuristic error bounds.
void heuristic_bounds() {
  std::mt19937 rng(3);
  std::uniform_int_distribution<int> value(0, 255), blocks(1, 5), side(1, 40);
  const CodecParams p = default_params();
  int worst_const = 0;
  for (int i = 0; i < 10000; ++i) {
    const int bh = blocks(rng), bw = blocks(rng);
    ImagePlane img(3 * bh, 3 * bw);
    for (int r = 0; r < bh; ++r) {
      for (int c = 0; c < bw; ++c) img.block(3 * r, 3 * c, 3, 3).setConstant(static_cast<std::uint8_t>(value(rng)));
    }
    const ImagePlane h = heuristic_decode(microshift_quantize(img, p));
    for (Eigen::Index k = 0; k < img.size(); ++k) worst_const = std::max(worst_const, circular_distance(h.data()[k], img.data()[k]));
  }
  int worst_any = 0;
  for (int i = 0; i < 2000; ++i) {
    ImagePlane img(side(rng), side(rng));
    for (Eigen::Index k = 0; k < img.size(); ++k) img.data()[k] = static_cast<std::uint8_t>(value(rng));
    const ImagePlane h = heuristic_decode(microshift_quantize(img, p));
    for (Eigen::Index k = 0; k < img.size(); ++k) worst_any = std::max(worst_any, circular_distance(h.data()[k], img.data()[k]));
  }
  report(3, "heuristic error bounds", worst_const <= 3 && worst_any < 32,
         "constant blocks max " + std::to_string(worst_const) + " (<= 3), arbitrary max " + std::to_string(worst_any) +
             " (< 32)");
}

// 4. Rate and heuristic quality on named images with a freshly trained table.
void named_images(const std::vector<Named>& test, const PredictorTable& table) {
  struct Target {
    const char* name;
    double bpp_center, psnr_center;  // bands are ±0.2 bpp and ±1 dB
  };
  const Target targets[] = {{"lena", 1.375, 32.393}, {"peppers", 0.976, 33.028}, {"airplane", 1.173, 33.066}};
  const CodecParams p = default_params();
  bool pass = true;
  int found = 0;
  std::string detail;
  for (const auto& t : targets) {
    auto it = std::find_if(test.begin(), test.end(), [&](const Named& n) { return n.name == t.name; });
    if (it == test.end()) {
      detail += std::string(t.name) + " not in corpus (unchecked); ";
      continue;
    }
    ++found;
    const auto t0 = Clock::now();
    const CompressedContainer c = encode_image(MultiPlaneImage::gray(it->plane), p, table);
    const ImagePlane h = heuristic_decode(decode_levels(c, table).planes[0]);
    const double secs = seconds_since(t0);
    const double b = bpp(c), q = psnr(it->plane, h);
    const bool ok = b >= t.bpp_center - 0.2 && b <= t.bpp_center + 0.2 && q >= t.psnr_center - 1.0 &&
                    q <= t.psnr_center + 1.0 && secs < 10.0;
    pass = pass && ok;
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s bpp %.3f psnr %.2f dB %.2f s%s; ", t.name, b, q, secs, ok ? "" : " OUT OF BAND");
    detail += buf;
  }
  report(4, "rate and heuristic PSNR, own table", pass && found > 0, detail);
}

struct Decoded {
  double bpp_v, heur, fast, mrf, ssim_fast, mrf_secs;
};

// 5 and 6 share the decodes.
std::vector<Decoded> decode_corpus(const std::vector<Named>& test) {
  const CodecParams p = default_params();
  std::vector<Decoded> out;
  for (const auto& t : test) {
    const CompressedContainer c = encode_image(MultiPlaneImage::gray(t.plane), p, default_table());
    const QuantizedImage q = decode_levels(c, default_table()).planes[0];
    const ImagePlane fast = fast_decode(q, WlsParams{});
    const auto t0 = Clock::now();
    const ImagePlane mrf = mrf_decode(q, MrfParams{});
    const double secs = seconds_since(t0);
    Decoded d{bpp(c), psnr(t.plane, heuristic_decode(q)), psnr(t.plane, fast), psnr(t.plane, mrf), ssim(t.plane, fast), secs};
    std::printf("  %-12s bpp %.4f heuristic %.2f fast %.2f mrf %.2f dB ssim(fast) %.4f mrf %.1f s\n", t.name.c_str(),
                d.bpp_v, d.heur, d.fast, d.mrf, d.ssim_fast, d.mrf_secs);
    std::fflush(stdout);
    out.push_back(d);
  }
  return out;
}

void corpus_trend(const std::vector<Decoded>& d) {
  std::vector<double> b, f, s;
  for (const auto& x : d) {
    b.push_back(x.bpp_v);
    f.push_back(x.fast);
    s.push_back(x.ssim_fast);
  }
  report(5, "FAST rate/quality trend", d.size() >= 10 && mean(f) >= 31.2 && mean(b) <= 1.45 && mean(s) >= 0.87,
         std::to_string(d.size()) + " images, mean FAST " + fmt("%.2f dB", mean(f)) + fmt(", bpp %.4f", mean(b)) +
             fmt(", SSIM %.4f", mean(s)));
}

void mrf_gain(const std::vector<Decoded>& d) {
  std::vector<double> vs_fast, vs_heur;
  double slowest = 0;
  for (const auto& x : d) {
    vs_fast.push_back(x.mrf - x.fast);
    vs_heur.push_back(x.mrf - x.heur);
    slowest = std::max(slowest, x.mrf_secs);
  }
  report(6, "MRF over FAST and heuristic", d.size() >= 10 && mean(vs_fast) >= 0.4 && mean(vs_heur) >= 1.0 && slowest <= 600,
         fmt("mean MRF-FAST %+.2f dB", mean(vs_fast)) + fmt(", MRF-heuristic %+.2f dB", mean(vs_heur)) +
             fmt(", slowest %.1f s", slowest));
}

// 7. Progressive FAST on Lena.
void progressive(const std::vector<Named>& test) {
  auto it = std::find_if(test.begin(), test.end(), [](const Named& n) { return n.name == "lena"; });
  if (it == test.end()) {
    report(7, "progressive", false, "lena missing");
    return;
  }
  const CodecParams p = default_params();
  const CompressedContainer c = encode_image(MultiPlaneImage::gray(it->plane), p, default_table());
  std::vector<double> seq;
  ImagePlane last;
  for (int k = 1; k <= 9; ++k) {
    last = progressive_fast(decode_levels(c, default_table(), k).planes[0], WlsParams{});
    seq.push_back(psnr(it->plane, last));
  }
  double worst_dip = 0;
  for (std::size_t k = 1; k < seq.size(); ++k) worst_dip = std::max(worst_dip, seq[k - 1] - seq[k]);
  const bool same = (last == fast_decode(decode_levels(c, default_table()).planes[0], WlsParams{})).all();
  std::string s;
  for (double v : seq) s += fmt("%.2f ", v);
  report(7, "progressive FAST on lena", worst_dip <= 0.3 && same,
         "PSNR K=1..9: " + s + fmt("(largest dip %.2f dB)", worst_dip) + ", K=9 identical: " + (same ? "yes" : "no"));
}

// 8. Learned predictor against MED.
void predictor_quality(const std::vector<Named>& test) {
  std::vector<double> intra, med;
  for (const auto& t : test) {
    intra.push_back(residue_entropy(t.plane, Predictor::kIntra, default_params(), default_table()));
    med.push_back(residue_entropy(t.plane, Predictor::kMed, default_params(), default_table()));
  }
  report(8, "learned predictor entropy", mean(intra) < mean(med),
         fmt("learned %.4f", mean(intra)) + fmt(" vs MED %.4f bits/pixel", mean(med)));
}

// Exhaustive minimum over a 3-label palette by depth-first enumeration in
// raster order, adding each pixel's unary and its links to earlier pixels.
double exhaustive_minimum(const MrfModel& m, const std::array<int, 3>& palette) {
  const int n = m.num_pixels(), w = m.width();
  Labeling x(n);
  double best = std::numeric_limits<double>::infinity();
  std::function<void(int, double)> visit = [&](int p, double acc) {
    if (acc >= best) return;
    if (p == n) {
      best = acc;
      return;
    }
    const int r = p / w, c = p % w;
    for (int l : palette) {
      double e = acc + m.unary(p, l);
      if (c > 0) e += m.gamma() * m.weight(p - 1, 0) * std::abs(l - x[p - 1]);
      if (r > 0) {
        const int up = p - w;
        e += m.gamma() * m.weight(up, 2) * std::abs(l - x[up]);
        if (c > 0) e += m.gamma() * m.weight(up - 1, 3) * std::abs(l - x[up - 1]);
        if (c + 1 < w) e += m.gamma() * m.weight(up + 1, 1) * std::abs(l - x[up + 1]);
      }
      x[p] = l;
      visit(p + 1, e);
    }
  };
  visit(0, 0.0);
  return best;
}

// 9. Coder and optimizer micro-oracles.
void micro_oracles(const std::vector<Named>& test) {
  std::vector<std::string> broken;
  for (int bits = 2; bits <= 4; ++bits) {
    const int levels = 1 << bits;
    for (int xhat = 0; xhat < levels; ++xhat) {
      std::vector<int> seen(levels, 0);
      for (int eps = -xhat; eps < levels - xhat; ++eps) {
        const int code = map_residue(eps, xhat, bits);
        if (code < 0 || code >= levels || seen[code]++ || unmap_residue(code, xhat, bits) != eps) {
          broken.push_back("map M=" + std::to_string(bits));
        }
      }
    }
  }
  {
    BitWriter w;
    for (int k = 0; k <= 7; ++k) {
      for (std::uint32_t v = 0; v <= 1023; ++v) rice_encode(w, k, v, kRunEscapeBits);
    }
    const Bytes bytes = w.finish();
    BitReader r(bytes);
    for (int k = 0; k <= 7; ++k) {
      for (std::uint32_t v = 0; v <= 1023; ++v) {
        if (rice_decode(r, k, kRunEscapeBits) != v) broken.push_back("rice");
      }
    }
  }
  {
    std::mt19937 rng(9);
    std::uniform_int_distribution<int> nodes(2, 10);
    std::uniform_real_distribution<double> cap(0.0, 10.0);
    std::bernoulli_distribution present(0.4);
    for (int trial = 0; trial < 200; ++trial) {
      FlowNetwork g;
      g.num_nodes = nodes(rng);
      g.source = 0;
      g.sink = g.num_nodes - 1;
      for (int u = 0; u < g.num_nodes; ++u) {
        for (int v = 0; v < g.num_nodes; ++v) {
          if (u != v && present(rng)) g.edges.push_back({u, v, std::round(cap(rng) * 4) / 4});
        }
      }
      double best = std::numeric_limits<double>::infinity();
      for (std::uint32_t mask = 0; mask < (1u << (g.num_nodes - 2)); ++mask) {
        double cut = 0;
        auto side = [&](int v) { return v == 0 || (v != g.sink && ((mask >> (v - 1)) & 1u)); };
        for (const auto& e : g.edges) {
          if (side(e.from) && !side(e.to)) cut += e.capacity;
        }
        best = std::min(best, cut);
      }
      if (std::abs(max_flow(g).flow - best) > 1e-9) broken.push_back("max_flow");
    }
  }
  int moves = 0, instances = 0;
  {
    auto lena = std::find_if(test.begin(), test.end(), [](const Named& n) { return n.name == "lena"; });
    const ImagePlane img = lena->plane;
    const CodecParams codec = default_params();
    std::mt19937 rng(10);
    std::uniform_int_distribution<int> pos(0, img.rows() / 3 - 2);
    for (double gamma : {0.02, 2.0, 20.0}) {
      for (int trial = 0; trial < 4; ++trial, ++instances) {
        const int r0 = 3 * pos(rng), c0 = 3 * pos(rng);
        const QuantizedImage q = microshift_quantize(img.block(r0, c0, 4, 4), codec);
        const MrfModel full = MrfModel::from_levels(q, MrfParams{});
        const int mid = heuristic_decode(q)(1, 1);
        const std::array<int, 3> palette{mid - 8, mid, mid + 8};
        MrfModel m(4, 4, gamma);
        for (int px = 0; px < 16; ++px) {
          std::array<double, 256> t;
          t.fill(1e6);
          for (int l : palette) t[l & 0xFF] = full.unary(px, l & 0xFF);
          m.set_unary(px, m.add_unary_table(t));
          m.set_window(px, {(mid - 8) & 0xFF, 17});
          for (int d = 0; d < 4; ++d) m.set_weight(px, d, full.weight(px, d));
        }
        const Labeling out = alpha_expansion(Labeling(16, mid), m, 20, nullptr,
                                             [&](int, double before, double after, const Labeling& x) {
                                               ++moves;
                                               if (!(after < before) || std::abs(after - total_energy(x, m)) > 1e-9) {
                                                 broken.push_back("expansion move");
                                               }
                                             });
        if (std::abs(total_energy(out, m) - exhaustive_minimum(m, palette)) > 1e-9) broken.push_back("expansion MAP");
      }
    }
    // Per-move monotonicity on a full decode as well.
    QuantizedImage q = microshift_quantize(img.block(0, 0, 64, 64), codec);
    MrfModel model = MrfModel::from_levels(q, MrfParams{});
    Labeling init(model.num_pixels());
    const ImagePlane start = progressive_initial(q);
    for (int k = 0; k < model.num_pixels(); ++k) init[k] = start.data()[k];
    alpha_expansion(init, model, 4, nullptr, [&](int, double before, double after, const Labeling&) {
      ++moves;
      if (!(after < before)) broken.push_back("expansion move");
    });
  }
  std::sort(broken.begin(), broken.end());
  broken.erase(std::unique(broken.begin(), broken.end()), broken.end());
  std::string what;
  for (const auto& b : broken) what += b + " ";
  report(9, "coder and optimizer oracles", broken.empty(),
         broken.empty() ? "map/unmap M=2..4, rice k=0..7 v<=1023, 200 max-flow graphs, " + std::to_string(instances) +
                              " exhaustive 4x4 3-label MAPs, " + std::to_string(moves) + " monotone moves"
                        : "failed: " + what);
}

// 10. Streaming encoder state.
void streaming() {
  const CodecParams p = default_params();
  auto pixel = [](int r, int c) { return static_cast<std::uint8_t>((r * 3 + c * 5 + (r * c) % 7) & 0xFF); };
  auto run = [&](int height) {
    PlaneEncoder enc(512, height, p, default_table());
    std::size_t peak = 0;
    std::vector<std::uint8_t> row(512);
    for (int r = 0; r < height; ++r) {
      for (int c = 0; c < 512; ++c) row[c] = pixel(r, c);
      enc.push_row(row);  // the row buffer is overwritten on the next pass
      peak = std::max(peak, enc.working_set_bytes());
    }
    const std::vector<Bytes> streams = enc.finish();
    return std::pair{peak, streams};
  };
  const auto [small, small_streams] = run(64);
  const auto [tall, tall_streams] = run(4096);
  ImagePlane img(64, 512);
  for (int r = 0; r < 64; ++r) {
    for (int c = 0; c < 512; ++c) img(r, c) = pixel(r, c);
  }
  CompressedContainer cont = encode_image(MultiPlaneImage::gray(img), p, default_table());
  const bool same = cont.streams[0] == small_streams;
  report(10, "streaming encoder", small == tall && same,
         "working set " + std::to_string(small) + " B at 512x64, " + std::to_string(tall) + " B at 512x4096; streamed " +
             (same ? "==" : "!=") + " whole-image encode");
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  const std::vector<Named> test = load_dir(data_dir() / "test");
  const std::vector<Named> train = load_dir(data_dir() / "train");
  std::vector<ImagePlane> corpus;
  for (const auto& t : train) corpus.push_back(t.plane);
  const PredictorTable own = train_table(corpus, default_params());
  std::printf("test images: %zu, training images: %zu\n", test.size(), train.size());

  lossless_roundtrip(test);
  shift_table();
  heuristic_bounds();
  named_images(test, own);
  const std::vector<Decoded> decoded = decode_corpus(test);
  corpus_trend(decoded);
  mrf_gain(decoded);
  progressive(test);
  predictor_quality(test);
  micro_oracles(test);
  streaming();

  std::printf("%s: %d criteria failed, %.0f s\n", failures ? "FAIL" : "PASS", failures, seconds_since(t0));
  return failures ? 1 : 0;
}

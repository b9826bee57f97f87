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

// microshift: encode, decode, train, eval and progressive decode from the
// command line. Exit codes: 0 ok, 1 runtime error, 2 usage error.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "microshift/container.hpp"
#include "microshift/context_model.hpp"
#include "microshift/core.hpp"
#include "microshift/decoder.hpp"
#include "microshift/encoder.hpp"
#include "microshift/fast_reconstruct.hpp"
#include "microshift/metrics.hpp"
#include "microshift/mrf.hpp"
#include "microshift/pixel_io.hpp"

namespace fs = std::filesystem;
using namespace microshift;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

PredictorTable load_table(const std::string& path, const CodecParams& params) {
  PredictorTable table = path.empty() ? default_table() : read_table(path);
  if (path.empty() && table.bits != params.bits) {
    // The shipped table only covers M = 3; other depths start from zero.
    table = zero_table(params.bits);
  }
  if (table.bits != params.bits) {
    throw UsageError("table was trained for M=" + std::to_string(table.bits) + ", not M=" +
                     std::to_string(params.bits));
  }
  return table;
}

CodecParams checked_params(int bits, int side) {
  try {
    return make_params(bits, side);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

struct DecodeOptions {
  std::string method = "fast";
  int subimages = 0;
  std::string table;
  WlsParams wls;
  MrfParams mrf;
};

void add_decode_tuning(CLI::App* cmd, DecodeOptions& o) {
  cmd->add_option("--table", o.table, "predictor table used at encode time");
  cmd->add_option("--wls-iterations", o.wls.iterations);
  cmd->add_option("--wls-lambda", o.wls.lambda);
  cmd->add_option("--wls-sigma", o.wls.sigma_color);
  cmd->add_option("--mrf-sigma", o.mrf.sigma);
  cmd->add_option("--mrf-gamma", o.mrf.gamma);
  cmd->add_option("--mrf-tsim", o.mrf.t_sim);
  cmd->add_option("--mrf-alpha", o.mrf.alpha_nu);
  cmd->add_option("--mrf-sweeps", o.mrf.max_sweeps);
  cmd->add_option("--mrf-margin", o.mrf.label_margin);
}

ImagePlane reconstruct(const QuantizedImage& q, const DecodeOptions& o) {
  const bool full = q.received == q.params.num_subimages();
  if (o.method == "heuristic") return full ? heuristic_decode(q) : progressive_initial(q);
  if (o.method == "fast") return full ? fast_decode(q, o.wls) : progressive_fast(q, o.wls);
  return mrf_decode(q, o.mrf);
}

MultiPlaneImage decode_container(const CompressedContainer& c, const DecodeOptions& o, int received) {
  const PredictorTable table = load_table(o.table, c.params);
  const DecodedLevels levels = decode_levels(c, table, received);
  if (levels.table_mismatch) {
    std::cerr << "warning: container was encoded with a different predictor table\n";
  }
  MultiPlaneImage out;
  out.kind = c.planes() == 3 ? ImageKind::kRgb : ImageKind::kGray;
  for (const QuantizedImage& q : levels.planes) out.planes.push_back(reconstruct(q, o));
  return out;
}

void check_decode_options(const DecodeOptions& o) {
  try {
    validate(o.wls);
    validate(o.mrf);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

int run_encode(const std::string& in, const std::string& out, int bits, int side, const std::string& table_path) {
  const CodecParams params = checked_params(bits, side);
  const PredictorTable table = load_table(table_path, params);
  const MultiPlaneImage img = read_image(in);
  const CompressedContainer c = encode_image(img, params, table);
  write_container(c, out);
  std::cout << metric_line("bpp", bpp(c)) << "\n";
  return 0;
}

int run_decode(const std::string& in, const std::string& out, DecodeOptions o) {
  check_decode_options(o);
  const CompressedContainer c = read_container(in);
  const int n2 = c.params.num_subimages();
  const int k = o.subimages == 0 ? n2 : o.subimages;
  if (k < 1 || k > n2) throw UsageError("--subimages must be in [1, " + std::to_string(n2) + "]");
  write_image(decode_container(c, o, k), out);
  std::cout << "method=" << o.method << "\nsubimages=" << k << "\n";
  return 0;
}

std::vector<fs::path> corpus_files(const std::string& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    const auto ext = e.path().extension();
    if (e.is_regular_file() && (ext == ".pgm" || ext == ".ppm")) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

void write_table_inc(const PredictorTable& table, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot write " + path);
  for (int i = 0; i < kNumContexts; ++i) {
    f << static_cast<int>(table.entries[i]) << (i + 1 < kNumContexts ? "," : "\n");
    if (i % 20 == 19) f << "\n";
  }
}

int run_train(const std::string& corpus, const std::string& out, int bits, int side, const std::string& inc) {
  const CodecParams params = checked_params(bits, side);
  if (!fs::is_directory(corpus)) throw UsageError("corpus is not a directory: " + corpus);
  TableTrainer trainer(params);
  int images = 0;
  for (const fs::path& p : corpus_files(corpus)) {
    for (const ImagePlane& plane : read_image(p).planes) trainer.add(plane);
    ++images;
  }
  if (images == 0) throw std::runtime_error("corpus holds no PGM/PPM images: " + corpus);
  const PredictorTable table = trainer.finish();
  write_table(table, out);
  if (!inc.empty()) write_table_inc(table, inc);
  std::cout << "images=" << images << "\nsamples=" << trainer.samples() << "\n";
  return 0;
}

int run_eval(const std::string& ref_path, const std::string& test_path, const std::string& bitstream) {
  const MultiPlaneImage ref = read_image(ref_path);
  const MultiPlaneImage test = read_image(test_path);
  if (ref.planes.size() != test.planes.size() || ref.width() != test.width() ||
      ref.height() != test.height()) {
    throw std::runtime_error("reference and test images differ in shape");
  }
  double p = 0;
  double s = 0;
  for (std::size_t i = 0; i < ref.planes.size(); ++i) {
    // Color PSNR from the pooled MSE; SSIM averaged per plane.
    const double mse = (to_double(ref.planes[i]) - to_double(test.planes[i])).square().mean();
    p += mse;
    s += ssim(ref.planes[i], test.planes[i]);
  }
  const double mse = p / ref.planes.size();
  const double db = mse == 0 ? kPsnrCap : std::min(kPsnrCap, 10 * std::log10(255.0 * 255.0 / mse));
  std::cout << metric_line("psnr_db", db) << "\n" << metric_line("ssim", s / ref.planes.size()) << "\n";
  if (!bitstream.empty()) std::cout << metric_line("bpp", bpp(read_container(bitstream))) << "\n";
  return 0;
}

int run_progressive(const std::string& in, const std::string& prefix, DecodeOptions o) {
  check_decode_options(o);
  if (o.method != "fast" && o.method != "mrf") throw UsageError("--method must be fast or mrf");
  const CompressedContainer c = read_container(in);
  const std::string ext = c.planes() == 3 ? ".ppm" : ".pgm";
  for (int k = 1; k <= c.params.num_subimages(); ++k) {
    const std::string path = prefix + "_k" + std::to_string(k) + ext;
    write_image(decode_container(c, o, k), path);
    std::cout << path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Microshift image codec"};
  app.require_subcommand(1);

  std::string in, out, table, corpus, inc, reference, test, bitstream, prefix;
  int bits = 3;
  int side = 3;
  DecodeOptions dec;

  auto* encode = app.add_subcommand("encode", "compress a PGM/PPM image");
  encode->add_option("-i,--input", in)->required()->check(CLI::ExistingFile);
  encode->add_option("-o,--output", out)->required();
  encode->add_option("-M,--bits", bits, "bits per level (2-4)");
  encode->add_option("-N,--side", side, "microshift pattern side (3 or 4)");
  encode->add_option("--table", table, "predictor table file");

  auto* decode = app.add_subcommand("decode", "reconstruct an image from a container");
  decode->add_option("-i,--input", in)->required()->check(CLI::ExistingFile);
  decode->add_option("-o,--output", out)->required();
  decode->add_option("--method", dec.method)->check(CLI::IsMember({"heuristic", "fast", "mrf"}));
  decode->add_option("--subimages", dec.subimages, "number of received subimages (default all)")
      ->check(CLI::PositiveNumber);
  add_decode_tuning(decode, dec);

  auto* train = app.add_subcommand("train", "learn a predictor table from a corpus");
  train->add_option("--corpus", corpus)->required();
  train->add_option("-o,--output", out)->required();
  train->add_option("-M,--bits", bits);
  train->add_option("-N,--side", side);
  train->add_option("--emit-inc", inc, "also write the entries as a C++ initializer");

  auto* eval = app.add_subcommand("eval", "compare a decoded image against its reference");
  eval->add_option("--reference", reference)->required()->check(CLI::ExistingFile);
  eval->add_option("--test", test)->required()->check(CLI::ExistingFile);
  eval->add_option("--bitstream", bitstream)->check(CLI::ExistingFile);

  auto* prog = app.add_subcommand("progressive", "decode every subimage prefix");
  prog->add_option("-i,--input", in)->required()->check(CLI::ExistingFile);
  prog->add_option("--out-prefix", prefix)->required();
  prog->add_option("--method", dec.method)->check(CLI::IsMember({"fast", "mrf"}));
  add_decode_tuning(prog, dec);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*encode) return run_encode(in, out, bits, side, table);
    if (*decode) return run_decode(in, out, dec);
    if (*train) return run_train(corpus, out, bits, side, inc);
    if (*eval) return run_eval(reference, test, bitstream);
    if (*prog) return run_progressive(in, prefix, dec);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

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
#include <functional>
#include <vector>

#include "microshift/core.hpp"
#include "microshift/image.hpp"

namespace microshift {

struct MrfParams {
  double sigma = 6.0;       // quantization noise scale, intensity units
  double gamma = 0.02;      // smoothness weight at full reception
  double t_sim = 32.0;      // equivalent-intensity threshold for an active edge
  double alpha_nu = 0.25;   // slope of the shift-compensation logistic
  int max_sweeps = 4;
  int label_margin = 32;    // labels kept on each side of a pixel's interval
};

void validate(const MrfParams& p);

inline constexpr double kDataCostCap = 50.0;

// −log Pr(z | x) for a pixel with shift δ, with the wrap of (x + δ) resolved
// towards the observed interval. Capped at kDataCostCap.
double data_cost(int label, int level, int shift, const CodecParams& codec, const MrfParams& p);

// λ·μ·ν for 8-neighbors p, q. `present_*` false marks an unreceived pixel,
// whose intensity test always passes. Throws std::invalid_argument if p and
// q are not 8-neighbors.
struct PixelObservation {
  int row = 0;
  int col = 0;
  int level = 0;
  int shift = 0;
  bool present = true;
};
double edge_weight(const PixelObservation& p, const PixelObservation& q, const CodecParams& codec,
                   const MrfParams& params);

// Energy Σ U_i(x_i) + γ Σ_(p,q) w_pq |x_p − x_q| on an 8-connected grid with
// per-pixel label windows.
class MrfModel {
 public:
  // Forward half of the 8-neighborhood: right, down-left, down, down-right.
  static constexpr std::array<Offset, 4> kForward = {{{0, 1}, {1, -1}, {1, 0}, {1, 1}}};

  MrfModel(int width, int height, double gamma);

  // Model of a (possibly partially received) level image with γ scaled by
  // received / N².
  static MrfModel from_levels(const QuantizedImage& q, const MrfParams& params);

  int width() const { return width_; }
  int height() const { return height_; }
  int num_pixels() const { return width_ * height_; }
  double gamma() const { return gamma_; }

  // Unary costs: a table of 256 costs per pixel, shared between pixels with
  // the same observation.
  void set_unary(int pixel, int table_index) { unary_index_[pixel] = table_index; }
  int add_unary_table(const std::array<double, 256>& costs);
  double unary(int pixel, int label) const { return unary_tables_[unary_index_[pixel]][label]; }

  // Circular label window {lo, …, lo + width − 1} mod 256 a pixel may take.
  void set_window(int pixel, UncertaintyInterval window) { window_[pixel] = window; }
  bool allows(int pixel, int label) const { return window_[pixel].contains(label); }

  // Weight of the edge from `pixel` along kForward[dir]; 0 when it leaves the grid.
  double weight(int pixel, int dir) const { return weights_[pixel * 4 + dir]; }
  void set_weight(int pixel, int dir, double w) { weights_[pixel * 4 + dir] = w; }
  // Neighbor index along kForward[dir], or −1 outside the grid.
  int neighbor(int pixel, int dir) const;

 private:
  int width_;
  int height_;
  double gamma_;
  std::vector<std::array<double, 256>> unary_tables_;
  std::vector<int> unary_index_;
  std::vector<UncertaintyInterval> window_;
  std::vector<double> weights_;
};

using Labeling = std::vector<int>;

double total_energy(const Labeling& labels, const MrfModel& model);

struct ExpansionStats {
  int sweeps = 0;
  int accepted_moves = 0;
  double initial_energy = 0.0;
  double final_energy = 0.0;
};

// Called after every accepted expansion with the label, the energies before
// and after the move, and the labeling after it.
using ExpansionObserver =
    std::function<void(int label, double before, double after, const Labeling& labels)>;

// Sweeps α over the labels, solving one binary min-cut per α; a move is
// kept only when it lowers the energy. Stops after max_sweeps or a sweep
// without an accepted move. `labels` must be allowed by each pixel's window.
Labeling alpha_expansion(Labeling labels, const MrfModel& model, int max_sweeps,
                         ExpansionStats* stats = nullptr, const ExpansionObserver& observer = {});

// MAP reconstruction from the received subimages, starting from the
// interpolated heuristic decode.
ImagePlane mrf_decode(const QuantizedImage& q, const MrfParams& params, ExpansionStats* stats = nullptr);

}  // namespace microshift

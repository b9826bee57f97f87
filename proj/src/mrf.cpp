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

#include "microshift/mrf.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <utility>

#include "microshift/fast_reconstruct.hpp"
#include "microshift/max_flow.hpp"

namespace microshift {

void validate(const MrfParams& p) {
  if (!(p.sigma > 0)) throw std::invalid_argument("mrf: sigma must be > 0");
  if (!(p.gamma >= 0)) throw std::invalid_argument("mrf: gamma must be >= 0");
  if (!(p.t_sim > 0)) throw std::invalid_argument("mrf: t_sim must be > 0");
  if (!(p.alpha_nu > 0)) throw std::invalid_argument("mrf: alpha_nu must be > 0");
  if (p.max_sweeps < 0) throw std::invalid_argument("mrf: max_sweeps must be >= 0");
  if (p.label_margin < 0) throw std::invalid_argument("mrf: label_margin must be >= 0");
}

double data_cost(int label, int level, int shift, const CodecParams& codec, const MrfParams& p) {
  const double delta = codec.delta;
  const double lo = level * delta;
  const double center = lo + delta / 2;
  // Representative of (label + shift) mod 256 closest to the center.
  double s = (label + shift) & 0xFF;
  if (s - center > 128) s -= 256;
  if (center - s > 128) s += 256;

  const double scale = std::sqrt(2.0) * p.sigma;
  const double a = (lo + delta - s) / scale;
  const double b = (lo - s) / scale;
  // erf(a) − erf(b) without cancellation in the tails.
  double mass;
  if (b > 0) {
    mass = std::erfc(b) - std::erfc(a);
  } else if (a < 0) {
    mass = std::erfc(-a) - std::erfc(-b);
  } else {
    mass = std::erf(a) - std::erf(b);
  }
  const double prob = mass / (2 * delta);
  if (!(prob > std::exp(-kDataCostCap))) return kDataCostCap;
  return std::max(0.0, -std::log(prob));
}

double edge_weight(const PixelObservation& p, const PixelObservation& q, const CodecParams& codec,
                   const MrfParams& params) {
  const int dr = std::abs(p.row - q.row);
  const int dc = std::abs(p.col - q.col);
  if (dr > 1 || dc > 1 || dr + dc == 0) {
    throw std::invalid_argument("edge_weight: pixels are not 8-neighbors");
  }
  const double lambda = dr + dc == 2 ? 1.0 / std::sqrt(2.0) : 1.0;
  double mu = 1.0;
  if (p.present && q.present) {
    const int vp = p.level * codec.delta - p.shift;
    const int vq = q.level * codec.delta - q.shift;
    mu = circular_distance(vp, vq) < params.t_sim ? 1.0 : 0.0;
  }
  const double nu = 1.0 / (1.0 + std::exp(-params.alpha_nu * std::abs(p.shift - q.shift)));
  return lambda * mu * nu;
}

MrfModel::MrfModel(int width, int height, double gamma)
    : width_(width),
      height_(height),
      gamma_(gamma),
      unary_tables_(1),
      unary_index_(static_cast<std::size_t>(width) * height, 0),
      window_(static_cast<std::size_t>(width) * height),
      weights_(static_cast<std::size_t>(width) * height * 4, 0.0) {
  if (width < 1 || height < 1) throw std::invalid_argument("MrfModel: empty grid");
  if (!(gamma >= 0)) throw std::invalid_argument("MrfModel: gamma must be >= 0");
  unary_tables_[0].fill(0.0);
}

int MrfModel::add_unary_table(const std::array<double, 256>& costs) {
  unary_tables_.push_back(costs);
  return static_cast<int>(unary_tables_.size()) - 1;
}

int MrfModel::neighbor(int pixel, int dir) const {
  const int r = pixel / width_ + kForward[dir].dr;
  const int c = pixel % width_ + kForward[dir].dc;
  if (r < 0 || r >= height_ || c < 0 || c >= width_) return -1;
  return r * width_ + c;
}

MrfModel MrfModel::from_levels(const QuantizedImage& q, const MrfParams& params) {
  validate(params);
  const CodecParams& codec = q.params;
  const int w = q.width();
  const int h = q.height();
  MrfModel model(w, h, params.gamma * q.received / codec.num_subimages());

  std::map<std::pair<int, int>, int> tables;
  auto observe = [&](int r, int c) {
    return PixelObservation{r, c, q.levels(r, c), codec.shift_at(r, c), q.present(r, c)};
  };
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      const int pixel = r * w + c;
      const PixelObservation obs = observe(r, c);
      if (obs.present) {
        auto [it, fresh] = tables.try_emplace({obs.level, obs.shift}, 0);
        if (fresh) {
          std::array<double, 256> costs;
          for (int x = 0; x < 256; ++x) costs[x] = data_cost(x, obs.level, obs.shift, codec, params);
          it->second = model.add_unary_table(costs);
        }
        model.set_unary(pixel, it->second);
        const UncertaintyInterval own = uncertainty_of(obs.level, obs.shift, codec);
        const int width = std::min(256, own.width + 2 * params.label_margin);
        model.set_window(pixel, {(own.lo - params.label_margin) & 0xFF, width});
      }
      for (int dir = 0; dir < 4; ++dir) {
        const int nr = r + kForward[dir].dr;
        const int nc = c + kForward[dir].dc;
        if (nr >= h || nc < 0 || nc >= w) continue;
        model.set_weight(pixel, dir, edge_weight(obs, observe(nr, nc), codec, params));
      }
    }
  }
  return model;
}

double total_energy(const Labeling& labels, const MrfModel& model) {
  if (static_cast<int>(labels.size()) != model.num_pixels()) {
    throw std::invalid_argument("total_energy: labeling size mismatch");
  }
  double unary = 0.0;
  double pairwise = 0.0;
  for (int p = 0; p < model.num_pixels(); ++p) {
    unary += model.unary(p, labels[p]);
    for (int dir = 0; dir < 4; ++dir) {
      const int q = model.neighbor(p, dir);
      if (q < 0) continue;
      pairwise += model.weight(p, dir) * std::abs(labels[p] - labels[q]);
    }
  }
  return unary + model.gamma() * pairwise;
}

namespace {

// Pixel reached by stepping backwards along kForward[dir], or −1.
int backward_neighbor(const MrfModel& m, int pixel, int dir) {
  const int r = pixel / m.width() - MrfModel::kForward[dir].dr;
  const int c = pixel % m.width() - MrfModel::kForward[dir].dc;
  if (r < 0 || r >= m.height() || c < 0 || c >= m.width()) return -1;
  return r * m.width() + c;
}

class Expander {
 public:
  explicit Expander(const MrfModel& model)
      : model_(model), node_(model.num_pixels(), -1), slope_(model.num_pixels(), 0.0) {}

  // Energy change of the best expansion towards alpha; fills `moved` with
  // the pixels that switch.
  double expand(const Labeling& labels, int alpha, std::vector<int>& moved) {
    moved.clear();
    variables_.clear();
    for (int p = 0; p < model_.num_pixels(); ++p) {
      if (labels[p] != alpha && model_.allows(p, alpha)) {
        node_[p] = static_cast<int>(variables_.size());
        variables_.push_back(p);
      } else {
        node_[p] = -1;
      }
    }
    if (variables_.empty()) return 0.0;

    graph_.reset();
    for (int p : variables_) {
      graph_.add_node();
      slope_[p] = model_.unary(p, alpha) - model_.unary(p, labels[p]);
    }
    const double gamma = model_.gamma();
    for (int p : variables_) {
      const int fp = labels[p];
      for (int dir = 0; dir < 4; ++dir) {
        const int q = model_.neighbor(p, dir);
        if (q >= 0) {
          const double w = gamma * model_.weight(p, dir);
          if (w > 0) {
            const int fq = labels[q];
            if (node_[q] >= 0) {
              // Kolmogorov–Zabih split of the 2×2 table A, B, C, D.
              const double a = w * std::abs(fp - fq);
              const double b = w * std::abs(fp - alpha);
              const double c = w * std::abs(alpha - fq);
              slope_[p] += c - a;
              slope_[q] -= c;
              graph_.add_edge(node_[p], node_[q], b + c - a, 0.0);
            } else {
              slope_[p] += w * (std::abs(alpha - fq) - std::abs(fp - fq));
            }
          }
        }
        const int r = backward_neighbor(model_, p, dir);
        if (r >= 0 && node_[r] < 0) {
          const double w = gamma * model_.weight(r, dir);
          if (w > 0) slope_[p] += w * (std::abs(alpha - labels[r]) - std::abs(fp - labels[r]));
        }
      }
    }
    for (int p : variables_) {
      const double s = slope_[p];
      graph_.add_terminal_weights(node_[p], std::max(s, 0.0), std::max(-s, 0.0));
    }
    graph_.solve();

    for (int p : variables_) {
      if (graph_.segment(node_[p]) == MaxFlowGraph<double>::Segment::kSink) moved.push_back(p);
    }
    return local_delta(labels, alpha, moved);
  }

 private:
  // Exact energy change from switching `moved` to alpha, summed over the
  // terms those pixels touch.
  double local_delta(const Labeling& labels, int alpha, const std::vector<int>& moved) {
    for (int p : variables_) node_[p] = 0;
    for (int p : moved) node_[p] = 1;
    auto now = [&](int p) { return node_[p] == 1 ? alpha : labels[p]; };
    double unary = 0.0;
    double pairwise = 0.0;
    for (int p : moved) {
      unary += model_.unary(p, alpha) - model_.unary(p, labels[p]);
      for (int dir = 0; dir < 4; ++dir) {
        const int q = model_.neighbor(p, dir);
        if (q >= 0) {
          pairwise += model_.weight(p, dir) *
                      (std::abs(alpha - now(q)) - std::abs(labels[p] - labels[q]));
        }
        const int r = backward_neighbor(model_, p, dir);
        if (r >= 0 && node_[r] != 1) {
          pairwise += model_.weight(r, dir) * (std::abs(alpha - labels[r]) - std::abs(labels[p] - labels[r]));
        }
      }
    }
    for (int p : variables_) node_[p] = -1;
    return unary + model_.gamma() * pairwise;
  }

  const MrfModel& model_;
  std::vector<int> node_;
  std::vector<double> slope_;
  std::vector<int> variables_;
  MaxFlowGraph<double> graph_;
};

}  // namespace

Labeling alpha_expansion(Labeling labels, const MrfModel& model, int max_sweeps, ExpansionStats* stats,
                         const ExpansionObserver& observer) {
  if (static_cast<int>(labels.size()) != model.num_pixels()) {
    throw std::invalid_argument("alpha_expansion: labeling size mismatch");
  }
  for (int p = 0; p < model.num_pixels(); ++p) {
    if (labels[p] < 0 || labels[p] > 255 || !model.allows(p, labels[p])) {
      throw std::invalid_argument("alpha_expansion: initial label outside its window");
    }
  }
  ExpansionStats local;
  local.initial_energy = total_energy(labels, model);
  double energy = local.initial_energy;
  Expander expander(model);
  std::vector<int> moved;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    ++local.sweeps;
    bool any = false;
    for (int alpha = 0; alpha < 256; ++alpha) {
      const double change = expander.expand(labels, alpha, moved);
      // Tolerance keeps rounding noise in the cut from cycling moves.
      if (moved.empty() || !(change < -1e-9 * std::max(1.0, std::abs(energy)))) continue;
      for (int p : moved) labels[p] = alpha;
      const double before = energy;
      energy += change;
      any = true;
      ++local.accepted_moves;
      if (observer) observer(alpha, before, energy, labels);
    }
    if (!any) break;
  }
  local.final_energy = energy;
  if (stats) *stats = local;
  return labels;
}

ImagePlane mrf_decode(const QuantizedImage& q, const MrfParams& params, ExpansionStats* stats) {
  if (q.received < 1) throw std::invalid_argument("mrf_decode: no subimage received");
  const MrfModel model = MrfModel::from_levels(q, params);
  const ImagePlane init = progressive_initial(q);
  Labeling labels(init.data(), init.data() + init.size());
  labels = alpha_expansion(std::move(labels), model, params.max_sweeps, stats);
  ImagePlane out(q.height(), q.width());
  for (Eigen::Index i = 0; i < out.size(); ++i) out.data()[i] = static_cast<std::uint8_t>(labels[i]);
  return out;
}

}  // namespace microshift

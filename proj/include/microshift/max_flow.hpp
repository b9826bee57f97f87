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

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <vector>

namespace microshift {

// Boykov-Kolmogorov augmenting-path max-flow over a graph with implicit
// source and sink terminals. Node capacities to the terminals are given with
// add_terminal_weights; inner edges with add_edge. Reusable via reset().
template <typename Cap>
class MaxFlowGraph {
 public:
  enum class Segment { kSource, kSink };

  explicit MaxFlowGraph(int node_hint = 0, int edge_hint = 0) {
    nodes_.reserve(node_hint);
    arcs_.reserve(2 * static_cast<std::size_t>(edge_hint));
  }

  void reset() {
    nodes_.clear();
    arcs_.clear();
    flow_ = 0;
  }

  int add_node() {
    nodes_.push_back(Node{});
    return static_cast<int>(nodes_.size()) - 1;
  }

  int num_nodes() const { return static_cast<int>(nodes_.size()); }

  // Adds source→node and node→sink capacities; the common part flows at once.
  void add_terminal_weights(int node, Cap to_source, Cap to_sink) {
    Node& n = nodes_[node];
    if (n.terminal_cap > 0) {
      to_source += n.terminal_cap;
    } else {
      to_sink -= n.terminal_cap;
    }
    flow_ += std::min(to_source, to_sink);
    n.terminal_cap = to_source - to_sink;
  }

  void add_edge(int from, int to, Cap cap, Cap rev_cap) {
    const int a = static_cast<int>(arcs_.size());
    arcs_.push_back(Arc{to, nodes_[from].first, a + 1, cap});
    arcs_.push_back(Arc{from, nodes_[to].first, a, rev_cap});
    nodes_[from].first = a;
    nodes_[to].first = a + 1;
  }

  Cap solve();

  Cap flow() const { return flow_; }

  // Nodes not reached by either search tree default to the source side.
  Segment segment(int node) const {
    const Node& n = nodes_[node];
    return n.parent != kNone && n.in_sink_tree ? Segment::kSink : Segment::kSource;
  }

 private:
  static constexpr int kNone = -1;
  static constexpr int kTerminal = -2;
  static constexpr int kOrphan = -3;
  static constexpr int kInfiniteDistance = std::numeric_limits<int>::max();

  struct Node {
    int first = kNone;   // first outgoing arc
    int parent = kNone;  // arc towards the parent, or a marker
    Cap terminal_cap = 0;  // > 0: residual from source, < 0: residual to sink
    bool in_sink_tree = false;
    bool queued = false;
    std::int64_t timestamp = 0;
    int distance = 0;
  };

  struct Arc {
    int head;
    int next;
    int sister;
    Cap residual;
  };

  int head_of(int arc) const { return arcs_[arc].head; }
  int tail_of(int arc) const { return arcs_[arcs_[arc].sister].head; }

  void activate(int node) {
    if (nodes_[node].queued) return;
    nodes_[node].queued = true;
    active_.push_back(node);
  }

  int next_active() {
    while (!active_.empty()) {
      const int node = active_.front();
      active_.pop_front();
      nodes_[node].queued = false;
      if (nodes_[node].parent != kNone) return node;
    }
    return kNone;
  }

  void make_orphan(int node) {
    nodes_[node].parent = kOrphan;
    orphans_.push_back(node);
  }

  int grow(int node);
  void augment(int middle_arc);
  void adopt(int node);

  std::vector<Node> nodes_;
  std::vector<Arc> arcs_;
  std::deque<int> active_;
  std::deque<int> orphans_;
  std::int64_t time_ = 0;
  Cap flow_ = 0;
};

template <typename Cap>
Cap MaxFlowGraph<Cap>::solve() {
  active_.clear();
  orphans_.clear();
  time_ = 0;
  for (int i = 0; i < num_nodes(); ++i) {
    Node& n = nodes_[i];
    n.queued = false;
    n.timestamp = 0;
    if (n.terminal_cap != 0) {
      n.in_sink_tree = n.terminal_cap < 0;
      n.parent = kTerminal;
      n.distance = 1;
      activate(i);
    } else {
      n.parent = kNone;
    }
  }

  int current = kNone;
  while (true) {
    int node = current;
    if (node != kNone && nodes_[node].parent == kNone) node = kNone;
    if (node == kNone) {
      node = next_active();
      if (node == kNone) break;
    }
    const int middle = grow(node);
    ++time_;
    if (middle == kNone) {
      current = kNone;
      continue;
    }
    current = node;
    augment(middle);
    while (!orphans_.empty()) {
      const int orphan = orphans_.front();
      orphans_.pop_front();
      adopt(orphan);
    }
  }
  return flow_;
}

// Extends the tree of `node` by one layer; returns an arc joining the two
// trees (oriented source side → sink side) or kNone.
template <typename Cap>
int MaxFlowGraph<Cap>::grow(int node) {
  const Node& n = nodes_[node];
  const bool sink = n.in_sink_tree;
  for (int a = n.first; a != kNone; a = arcs_[a].next) {
    const int toward = sink ? arcs_[a].sister : a;  // arc carrying flow towards the sink
    if (arcs_[toward].residual <= 0) continue;
    const int j = head_of(a);
    Node& m = nodes_[j];
    if (m.parent == kNone) {
      m.in_sink_tree = sink;
      m.parent = arcs_[a].sister;
      m.timestamp = n.timestamp;
      m.distance = n.distance + 1;
      activate(j);
    } else if (m.in_sink_tree != sink) {
      return toward;
    } else if (m.timestamp <= n.timestamp && m.distance > n.distance) {
      m.parent = arcs_[a].sister;
      m.timestamp = n.timestamp;
      m.distance = n.distance + 1;
    }
  }
  return kNone;
}

template <typename Cap>
void MaxFlowGraph<Cap>::augment(int middle_arc) {
  Cap bottleneck = arcs_[middle_arc].residual;
  int i = tail_of(middle_arc);
  while (nodes_[i].parent != kTerminal) {
    const int pa = nodes_[i].parent;
    bottleneck = std::min(bottleneck, arcs_[arcs_[pa].sister].residual);
    i = head_of(pa);
  }
  bottleneck = std::min(bottleneck, nodes_[i].terminal_cap);
  i = head_of(middle_arc);
  while (nodes_[i].parent != kTerminal) {
    const int pa = nodes_[i].parent;
    bottleneck = std::min(bottleneck, arcs_[pa].residual);
    i = head_of(pa);
  }
  bottleneck = std::min(bottleneck, -nodes_[i].terminal_cap);

  arcs_[middle_arc].residual -= bottleneck;
  arcs_[arcs_[middle_arc].sister].residual += bottleneck;

  i = tail_of(middle_arc);
  while (true) {
    const int pa = nodes_[i].parent;
    if (pa == kTerminal) {
      nodes_[i].terminal_cap -= bottleneck;
      if (nodes_[i].terminal_cap <= 0) make_orphan(i);
      break;
    }
    const int down = arcs_[pa].sister;
    arcs_[pa].residual += bottleneck;
    arcs_[down].residual -= bottleneck;
    if (arcs_[down].residual <= 0) make_orphan(i);
    i = head_of(pa);
  }
  i = head_of(middle_arc);
  while (true) {
    const int pa = nodes_[i].parent;
    if (pa == kTerminal) {
      nodes_[i].terminal_cap += bottleneck;
      if (nodes_[i].terminal_cap >= 0) make_orphan(i);
      break;
    }
    arcs_[arcs_[pa].sister].residual += bottleneck;
    arcs_[pa].residual -= bottleneck;
    if (arcs_[pa].residual <= 0) make_orphan(i);
    i = head_of(pa);
  }
  flow_ += bottleneck;
}

template <typename Cap>
void MaxFlowGraph<Cap>::adopt(int node) {
  Node& n = nodes_[node];
  const bool sink = n.in_sink_tree;
  int best_arc = kNone;
  int best_distance = kInfiniteDistance;

  for (int a = n.first; a != kNone; a = arcs_[a].next) {
    const int toward_node = sink ? a : arcs_[a].sister;  // residual needed to reattach
    if (arcs_[toward_node].residual <= 0) continue;
    const int j = head_of(a);
    if (nodes_[j].in_sink_tree != sink || nodes_[j].parent == kNone) continue;

    // Walk to the root to check that j is still connected to a terminal.
    int d = 0;
    int k = j;
    while (true) {
      if (nodes_[k].timestamp == time_) {
        d += nodes_[k].distance;
        break;
      }
      const int pa = nodes_[k].parent;
      ++d;
      if (pa == kTerminal) {
        nodes_[k].timestamp = time_;
        nodes_[k].distance = 1;
        break;
      }
      if (pa == kOrphan) {
        d = kInfiniteDistance;
        break;
      }
      k = head_of(pa);
    }
    if (d == kInfiniteDistance) continue;
    if (d < best_distance) {
      best_arc = a;
      best_distance = d;
    }
    for (k = j; nodes_[k].timestamp != time_; k = head_of(nodes_[k].parent)) {
      nodes_[k].timestamp = time_;
      nodes_[k].distance = d--;
    }
  }

  n.parent = best_arc;
  if (best_arc != kNone) {
    n.timestamp = time_;
    n.distance = best_distance + 1;
    return;
  }
  for (int a = n.first; a != kNone; a = arcs_[a].next) {
    const int j = head_of(a);
    Node& m = nodes_[j];
    if (m.in_sink_tree != sink || m.parent == kNone) continue;
    const int toward_node = sink ? a : arcs_[a].sister;
    if (arcs_[toward_node].residual > 0) activate(j);
    if (m.parent != kTerminal && m.parent != kOrphan && head_of(m.parent) == node) make_orphan(j);
  }
}

// Max-flow on an explicit network with designated source and sink nodes.
struct FlowEdge {
  int from = 0;
  int to = 0;
  double capacity = 0.0;
};

struct FlowNetwork {
  int num_nodes = 0;
  int source = 0;
  int sink = 1;
  std::vector<FlowEdge> edges;
};

struct MinCut {
  double flow = 0.0;
  std::vector<bool> source_side;  // per node of the network
};

MinCut max_flow(const FlowNetwork& network);

}  // namespace microshift

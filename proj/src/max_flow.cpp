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

#include "microshift/max_flow.hpp"

#include <stdexcept>

namespace microshift {

MinCut max_flow(const FlowNetwork& network) {
  if (network.source == network.sink || network.source < 0 || network.sink < 0 ||
      network.source >= network.num_nodes || network.sink >= network.num_nodes) {
    throw std::invalid_argument("max_flow: invalid terminals");
  }
  // Inner nodes keep their index; the terminals map to the implicit ones.
  MaxFlowGraph<double> graph(network.num_nodes, static_cast<int>(network.edges.size()));
  for (int i = 0; i < network.num_nodes; ++i) graph.add_node();
  double direct = 0.0;
  for (const FlowEdge& e : network.edges) {
    if (e.capacity < 0.0) throw std::invalid_argument("max_flow: negative capacity");
    const bool from_source = e.from == network.source;
    const bool to_sink = e.to == network.sink;
    if (e.from == e.to || e.to == network.source || e.from == network.sink) continue;
    if (from_source && to_sink) {
      direct += e.capacity;
    } else if (from_source) {
      graph.add_terminal_weights(e.to, e.capacity, 0.0);
    } else if (to_sink) {
      graph.add_terminal_weights(e.from, 0.0, e.capacity);
    } else {
      graph.add_edge(e.from, e.to, e.capacity, 0.0);
    }
  }
  MinCut cut;
  cut.flow = graph.solve() + direct;
  cut.source_side.resize(network.num_nodes);
  for (int i = 0; i < network.num_nodes; ++i) {
    cut.source_side[i] = graph.segment(i) == MaxFlowGraph<double>::Segment::kSource;
  }
  cut.source_side[network.source] = true;
  cut.source_side[network.sink] = false;
  return cut;
}

}  // namespace microshift

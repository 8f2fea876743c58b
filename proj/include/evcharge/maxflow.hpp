// Copyright 2026 The evcharge Authors
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

// Demand-to-station assignment as one maximum-flow solve per period.
//
// Capacities are converted to integer milli-kW before solving, so flows are
// exact and the min cut found after the last phase certifies optimality in
// the same integer units.

#ifndef EVCHARGE_MAXFLOW_HPP
#define EVCHARGE_MAXFLOW_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "evcharge/geo.hpp"
#include "evcharge/model.hpp"

namespace evcharge::maxflow {

using Milli = std::int64_t;

/// kW -> milli-kW, rounded to nearest.
Milli to_milli(double kw);
inline double to_kw(Milli milli) { return static_cast<double>(milli) / 1000.0; }

/// Dinic's algorithm (BFS level graph, blocking flow by DFS with current-arc
/// pointers) on integer capacities.
class Dinic {
 public:
  explicit Dinic(int num_nodes);

  /// Returns the arc id; its residual twin is id ^ 1.
  int add_arc(int from, int to, Milli capacity);

  Milli solve(int source, int sink);

  Milli flow(int arc) const { return cap_[arc ^ 1]; }
  Milli capacity(int arc) const { return cap_[arc] + cap_[arc ^ 1]; }
  int from(int arc) const { return to_[arc ^ 1]; }
  int to(int arc) const { return to_[arc]; }
  int num_arcs() const { return static_cast<int>(to_.size()) / 2; }

  /// Nodes reachable from the source in the final residual graph.
  std::vector<bool> source_side(int source) const;

 private:
  bool build_levels(int source, int sink);
  Milli push(int node, int sink, Milli limit);

  int num_nodes_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> to_;
  std::vector<Milli> cap_;  // residual capacity; the twin holds the flow
  std::vector<int> level_;
  std::vector<std::size_t> next_;
};

struct MinCut {
  std::vector<bool> source_side;  // by node
  Milli capacity_milli = 0;
};

struct MaxFlowResult {
  Milli value_milli = 0;
  double value_kw = 0.0;
  std::vector<Milli> arc_flow_milli;  // indexed like FlowNetwork::arcs()
  MinCut cut;
};

/// Maximum source-sink flow of period t.
MaxFlowResult max_flow(const geo::FlowNetwork& network, int period);

/// Capacity (milli-kW) of the arcs leaving `source_side`.
Milli cut_capacity(const geo::FlowNetwork& network, int period, const std::vector<bool>& source_side);

struct EvaluateOptions {
  int threads = 1;
};

/// Satisfied / unsatisfied / impossible demand of the existing network, or
/// of the network expanded by `plan`. Throws InfeasiblePlan on a bad plan.
AssignmentResult evaluate(const Instance& instance, const PlacementPlan* plan = nullptr,
                          const EvaluateOptions& options = {});

inline AssignmentResult evaluate(const Instance& instance, const PlacementPlan& plan,
                                 const EvaluateOptions& options = {}) {
  return evaluate(instance, &plan, options);
}

}  // namespace evcharge::maxflow

#endif  // EVCHARGE_MAXFLOW_HPP

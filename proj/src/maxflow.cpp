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

#include "evcharge/maxflow.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <queue>

namespace evcharge::maxflow {

Milli to_milli(double kw) { return static_cast<Milli>(std::llround(kw * 1000.0)); }

Dinic::Dinic(int num_nodes) : num_nodes_(num_nodes), adj_(num_nodes), level_(num_nodes), next_(num_nodes) {}

int Dinic::add_arc(int from, int to, Milli capacity) {
  const int id = static_cast<int>(to_.size());
  to_.push_back(to);
  cap_.push_back(capacity);
  to_.push_back(from);
  cap_.push_back(0);
  adj_[from].push_back(id);
  adj_[to].push_back(id + 1);
  return id;
}

bool Dinic::build_levels(int source, int sink) {
  std::fill(level_.begin(), level_.end(), -1);
  std::queue<int> queue;
  level_[source] = 0;
  queue.push(source);
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop();
    for (int id : adj_[v]) {
      if (cap_[id] > 0 && level_[to_[id]] < 0) {
        level_[to_[id]] = level_[v] + 1;
        queue.push(to_[id]);
      }
    }
  }
  return level_[sink] >= 0;
}

Milli Dinic::push(int node, int sink, Milli limit) {
  if (node == sink) return limit;
  for (auto& i = next_[node]; i < adj_[node].size(); ++i) {
    const int id = adj_[node][i];
    const int w = to_[id];
    if (cap_[id] <= 0 || level_[w] != level_[node] + 1) continue;
    const Milli pushed = push(w, sink, std::min(limit, cap_[id]));
    if (pushed > 0) {
      cap_[id] -= pushed;
      cap_[id ^ 1] += pushed;
      return pushed;
    }
  }
  return 0;
}

Milli Dinic::solve(int source, int sink) {
  Milli total = 0;
  while (build_levels(source, sink)) {
    std::fill(next_.begin(), next_.end(), 0);
    while (Milli pushed = push(source, sink, std::numeric_limits<Milli>::max())) total += pushed;
  }
  return total;
}

std::vector<bool> Dinic::source_side(int source) const {
  std::vector<bool> seen(num_nodes_, false);
  std::vector<int> stack{source};
  seen[source] = true;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int id : adj_[v]) {
      if (cap_[id] > 0 && !seen[to_[id]]) {
        seen[to_[id]] = true;
        stack.push_back(to_[id]);
      }
    }
  }
  return seen;
}

namespace {

// Finite stand-in for the infinite M-arc capacity: more than everything the
// source can emit in the period.
Milli infinite_milli(const geo::FlowNetwork& network, int period) {
  Milli total = 1;
  for (int o = 0; o < network.num_ods(); ++o) total += to_milli(network.cap(period, network.l_arc(o)));
  return total;
}

Milli arc_cap_milli(const geo::FlowNetwork& network, int period, int arc, Milli infinite) {
  const double cap = network.cap(period, arc);
  return network.is_infinite(cap) ? infinite : to_milli(cap);
}

}  // namespace

Milli cut_capacity(const geo::FlowNetwork& network, int period, const std::vector<bool>& source_side) {
  const Milli infinite = infinite_milli(network, period);
  Milli total = 0;
  for (int a = 0; a < network.num_arcs(); ++a) {
    const auto& arc = network.arcs()[a];
    if (source_side[arc.from] && !source_side[arc.to]) total += arc_cap_milli(network, period, a, infinite);
  }
  return total;
}

MaxFlowResult max_flow(const geo::FlowNetwork& network, int period) {
  const Milli infinite = infinite_milli(network, period);
  Dinic dinic(network.num_nodes());
  for (int a = 0; a < network.num_arcs(); ++a) {
    const auto& arc = network.arcs()[a];
    const Milli cap = arc_cap_milli(network, period, a, infinite);
    if (cap < 0) throw InvalidInstance("negative arc capacity");
    dinic.add_arc(arc.from, arc.to, cap);
  }
  MaxFlowResult out;
  out.value_milli = dinic.solve(network.source(), network.sink());
  out.value_kw = to_kw(out.value_milli);
  out.arc_flow_milli.resize(network.num_arcs());
  for (int a = 0; a < network.num_arcs(); ++a) out.arc_flow_milli[a] = dinic.flow(2 * a);
  out.cut.source_side = dinic.source_side(network.source());
  out.cut.capacity_milli = cut_capacity(network, period, out.cut.source_side);
  return out;
}

AssignmentResult evaluate(const Instance& instance, const PlacementPlan* plan, const EvaluateOptions& options) {
  const geo::FlowNetwork network = geo::build_flow_network(instance, plan != nullptr, plan);
  const int num_periods = network.num_periods();

  std::vector<MaxFlowResult> flows(num_periods);
  if (options.threads > 1 && num_periods > 1) {
    std::vector<std::future<MaxFlowResult>> jobs;
    for (int t = 0; t < num_periods; ++t) {
      jobs.push_back(std::async(std::launch::async, [&network, t] { return max_flow(network, t); }));
    }
    for (int t = 0; t < num_periods; ++t) flows[t] = jobs[t].get();
  } else {
    for (int t = 0; t < num_periods; ++t) flows[t] = max_flow(network, t);
  }

  // An OD is impossible if it reaches no existing station and no opened
  // candidate; arcs to unopened candidates do not count.
  std::vector<bool> site_usable(network.num_sites(), true);
  for (int c = 0; c < network.num_candidates(); ++c) {
    site_usable[network.num_stations() + c] = plan != nullptr && plan->opened.contains(instance.candidates[c].id);
  }

  AssignmentResult out;
  out.od_impossible.assign(network.num_ods(), true);
  for (int k = 0; k < network.num_m_arcs(); ++k) {
    out.m_arcs.emplace_back(network.m_arc_od(k), network.m_arc_site(k));
    if (site_usable[network.m_arc_site(k)]) out.od_impossible[network.m_arc_od(k)] = false;
  }
  out.od_served_kw.assign(network.num_ods(), 0.0);

  Milli total_demand = 0, total_satisfied = 0, total_impossible = 0;
  for (int t = 0; t < num_periods; ++t) {
    const auto& f = flows[t];
    PeriodAssignment pa;
    Milli demand = 0, impossible = 0;
    for (int o = 0; o < network.num_ods(); ++o) {
      const Milli cap = to_milli(network.cap(t, network.l_arc(o)));
      demand += cap;
      if (out.od_impossible[o]) impossible += cap;
      const Milli served = f.arc_flow_milli[network.l_arc(o)];
      pa.od_flow_kw.push_back(to_kw(served));
      out.od_served_kw[o] += to_kw(served);
    }
    for (int k = network.m_arc_begin(); k < network.m_arc_end(); ++k) pa.arc_flow_kw.push_back(to_kw(f.arc_flow_milli[k]));
    for (int s = 0; s < network.num_sites(); ++s) pa.site_flow_kw.push_back(to_kw(f.arc_flow_milli[network.r_arc(s)]));
    pa.demand_kw = to_kw(demand);
    pa.satisfied_kw = to_kw(f.value_milli);
    pa.impossible_kw = to_kw(impossible);
    pa.unsatisfied_kw = to_kw(demand - f.value_milli - impossible);
    total_demand += demand;
    total_satisfied += f.value_milli;
    total_impossible += impossible;
    out.per_period.push_back(std::move(pa));
  }
  out.total_demand_kw = to_kw(total_demand);
  out.satisfied_kw = to_kw(total_satisfied);
  out.impossible_kw = to_kw(total_impossible);
  out.unsatisfied_kw = to_kw(total_demand - total_satisfied - total_impossible);
  return out;
}

}  // namespace evcharge::maxflow

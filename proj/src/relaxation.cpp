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

#include "evcharge/relaxation.hpp"

#include <algorithm>
#include <stdexcept>

namespace evcharge::lp {

std::string to_string(IntVarKind kind) {
  switch (kind) {
    case IntVarKind::Z2: return "z2";
    case IntVarKind::Z3: return "z3";
    case IntVarKind::Y2: return "y2";
    case IntVarKind::Y3: return "y3";
    case IntVarKind::X: return "x";
  }
  return "?";
}

std::vector<IntVar> integer_layout(const Instance& instance) {
  std::vector<IntVar> vars;
  for (int e = 0; e < static_cast<int>(instance.stations.size()); ++e) vars.push_back({IntVarKind::X, e});
  for (int s = 0; s < static_cast<int>(instance.candidates.size()); ++s) {
    vars.push_back({IntVarKind::Y2, s});
    vars.push_back({IntVarKind::Y3, s});
    vars.push_back({IntVarKind::Z2, s});
    vars.push_back({IntVarKind::Z3, s});
  }
  return vars;
}

IntegerBounds default_bounds(const Instance& instance) {
  IntegerBounds b;
  for (const auto& v : integer_layout(instance)) {
    double hi = 1.0;
    switch (v.kind) {
      case IntVarKind::X: hi = instance.stations[v.index].expandable_outlets(); break;
      case IntVarKind::Y2: hi = instance.costs.max_outlets_l2; break;
      case IntVarKind::Y3: hi = instance.costs.max_outlets_l3; break;
      default: break;
    }
    b.lower.push_back(0.0);
    b.upper.push_back(std::max(0.0, hi));
  }
  return b;
}

IntegerBounds bounds_for_plan(const Instance& instance, const PlacementPlan& plan) {
  IntegerBounds b;
  for (const auto& v : integer_layout(instance)) {
    double value = 0.0;
    if (v.kind == IntVarKind::X) {
      if (auto it = plan.added_outlets.find(instance.stations[v.index].id); it != plan.added_outlets.end()) {
        value = it->second;
      }
    } else if (auto it = plan.opened.find(instance.candidates[v.index].id); it != plan.opened.end()) {
      const bool l2 = it->second.level == Level::L2;
      switch (v.kind) {
        case IntVarKind::Y2: value = l2 ? it->second.outlets : 0; break;
        case IntVarKind::Y3: value = l2 ? 0 : it->second.outlets; break;
        case IntVarKind::Z2: value = l2 ? 1 : 0; break;
        case IntVarKind::Z3: value = l2 ? 0 : 1; break;
        default: break;
      }
    }
    b.lower.push_back(value);
    b.upper.push_back(value);
  }
  return b;
}

std::vector<double> Relaxation::integer_values(const LpSolution& solution) const {
  std::vector<double> out(int_col.size(), 0.0);
  if (solution.primal.empty()) return out;
  for (std::size_t i = 0; i < int_col.size(); ++i) out[i] = solution.primal[int_col[i]];
  return out;
}

void Relaxation::apply(const IntegerBounds& bounds) {
  if (bounds.lower.size() != int_col.size() || bounds.upper.size() != int_col.size()) {
    throw std::invalid_argument("integer bounds do not match the relaxation");
  }
  for (std::size_t i = 0; i < int_col.size(); ++i) lp.set_bounds(int_col[i], bounds.lower[i], bounds.upper[i]);
}

int Relaxation::find(IntVarKind kind, int index) const {
  for (std::size_t i = 0; i < int_vars.size(); ++i) {
    if (int_vars[i].kind == kind && int_vars[i].index == index) return static_cast<int>(i);
  }
  return -1;
}

namespace {

double flow_scale_for(const geo::FlowNetwork& network) {
  double scale = 0.0;
  for (int t = 0; t < network.num_periods(); ++t) {
    for (int o = 0; o < network.num_ods(); ++o) scale = std::max(scale, network.cap(t, network.l_arc(o)));
  }
  return scale > 1.0 ? scale : 1.0;
}

// Flow part shared by both programs. Returns the c/d column of each (t, site).
std::vector<std::vector<int>> add_flow_part(LinearProgram& lp, const geo::FlowNetwork& network, double scale) {
  const int periods = network.num_periods();
  const int sites = network.num_sites();
  std::vector<std::vector<int>> site_col(periods, std::vector<int>(sites));
  for (int t = 0; t < periods; ++t) {
    const std::string tag = "_" + std::to_string(t);
    std::vector<int> od_row(network.num_ods());
    std::vector<int> site_row(sites);
    for (int o = 0; o < network.num_ods(); ++o) {
      const int col = lp.add_column(1.0, 0.0, network.cap(t, network.l_arc(o)) / scale, "a" + tag + "_" + std::to_string(o));
      od_row[o] = lp.add_row(Sense::Equal, 0.0, "od" + tag + "_" + std::to_string(o));
      lp.add_entry(od_row[o], col, 1.0);
    }
    for (int s = 0; s < sites; ++s) site_row[s] = lp.add_row(Sense::Equal, 0.0, "site" + tag + "_" + std::to_string(s));
    for (int k = 0; k < network.num_m_arcs(); ++k) {
      const int col = lp.add_column(0.0, 0.0, kInf, "b" + tag + "_" + std::to_string(k));
      lp.add_entry(od_row[network.m_arc_od(k)], col, -1.0);
      lp.add_entry(site_row[network.m_arc_site(k)], col, 1.0);
    }
    for (int s = 0; s < sites; ++s) {
      site_col[t][s] = lp.add_column(0.0, 0.0, kInf, "c" + tag + "_" + std::to_string(s));
      lp.add_entry(site_row[s], site_col[t][s], -1.0);
    }
  }
  return site_col;
}

}  // namespace

std::vector<std::vector<double>> reachable_demand(const geo::FlowNetwork& network) {
  std::vector<std::vector<double>> out(network.num_periods(), std::vector<double>(network.num_sites(), 0.0));
  for (int t = 0; t < network.num_periods(); ++t) {
    for (int k = 0; k < network.num_m_arcs(); ++k) {
      out[t][network.m_arc_site(k)] += network.cap(t, network.l_arc(network.m_arc_od(k)));
    }
  }
  return out;
}

IntegerBounds tightened_bounds(const Instance& instance, const geo::FlowNetwork& network) {
  IntegerBounds b = default_bounds(instance);
  const auto reach = reachable_demand(network);
  const auto vars = integer_layout(instance);
  const int num_stations = network.num_stations();
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const IntVar& v = vars[i];
    if (v.kind == IntVarKind::Z2 || v.kind == IntVarKind::Z3) continue;
    double useful = 0.0;
    for (int t = 0; t < network.num_periods(); ++t) {
      const double dur = instance.periods[t].duration_s;
      double need = 0.0, unit = 0.0;
      if (v.kind == IntVarKind::X) {
        const auto& st = instance.stations[v.index];
        need = reach[t][v.index] - st.capacity_kw(dur);
        unit = st.per_outlet_kw_per_s * dur;
      } else {
        need = reach[t][num_stations + v.index];
        unit = instance.costs.new_outlet_kw(v.kind == IntVarKind::Y2 ? Level::L2 : Level::L3, dur);
      }
      if (need > 0.0 && unit > 0.0) useful = std::max(useful, std::ceil(need / unit - 1e-9));
    }
    b.upper[i] = std::min(b.upper[i], useful);
  }
  return b;
}

Relaxation build_relaxation(const Instance& instance, const geo::FlowNetwork& network,
                            const IntegerBounds& bounds) {
  if (!network.includes_candidates() && network.num_candidates() == 0 && !instance.candidates.empty()) {
    throw std::invalid_argument("relaxation needs a network with candidates");
  }
  Relaxation r;
  r.flow_scale = flow_scale_for(network);
  r.int_vars = integer_layout(instance);
  const auto site_col = add_flow_part(r.lp, network, r.flow_scale);

  for (const auto& v : r.int_vars) {
    const std::string name =
        to_string(v.kind) + "_" + (v.kind == IntVarKind::X ? instance.stations[v.index].id : instance.candidates[v.index].id);
    r.int_col.push_back(r.lp.add_column(0.0, 0.0, 0.0, name));
  }
  r.apply(bounds);

  const int num_stations = network.num_stations();
  const auto& costs = instance.costs;
  const auto reach = reachable_demand(network);
  for (int t = 0; t < network.num_periods(); ++t) {
    const double dur = instance.periods[t].duration_s;
    for (int e = 0; e < num_stations; ++e) {
      const auto& st = instance.stations[e];
      const double cap = st.capacity_kw(dur);
      const int row = r.lp.add_row(Sense::LessEqual, cap / r.flow_scale);
      r.lp.add_entry(row, site_col[t][e], 1.0);
      const double coef = std::min(st.per_outlet_kw_per_s * dur, std::max(0.0, reach[t][e] - cap));
      if (coef > 0.0) r.lp.add_entry(row, r.int_col[r.find(IntVarKind::X, e)], -coef / r.flow_scale);
    }
    for (int s = 0; s < network.num_candidates(); ++s) {
      const double d = reach[t][num_stations + s];
      const int row = r.lp.add_row(Sense::LessEqual, 0.0);
      r.lp.add_entry(row, site_col[t][num_stations + s], 1.0);
      const double q2 = std::min(costs.new_outlet_kw(Level::L2, dur), d);
      const double q3 = std::min(costs.new_outlet_kw(Level::L3, dur), d);
      if (q2 > 0.0) r.lp.add_entry(row, r.int_col[r.find(IntVarKind::Y2, s)], -q2 / r.flow_scale);
      if (q3 > 0.0) r.lp.add_entry(row, r.int_col[r.find(IntVarKind::Y3, s)], -q3 / r.flow_scale);
    }
  }

  for (int s = 0; s < static_cast<int>(instance.candidates.size()); ++s) {
    const int y2 = r.int_col[r.find(IntVarKind::Y2, s)], y3 = r.int_col[r.find(IntVarKind::Y3, s)];
    const int z2 = r.int_col[r.find(IntVarKind::Z2, s)], z3 = r.int_col[r.find(IntVarKind::Z3, s)];
    int row = r.lp.add_row(Sense::LessEqual, 0.0);
    r.lp.add_entry(row, y2, 1.0);
    r.lp.add_entry(row, z2, -costs.max_outlets_l2);
    row = r.lp.add_row(Sense::LessEqual, 0.0);
    r.lp.add_entry(row, y3, 1.0);
    r.lp.add_entry(row, z3, -costs.max_outlets_l3);
    row = r.lp.add_row(Sense::LessEqual, 1.0);
    r.lp.add_entry(row, z2, 1.0);
    r.lp.add_entry(row, z3, 1.0);
  }

  const int budget = r.lp.add_row(Sense::LessEqual, to_double(costs.budget), "budget");
  for (std::size_t i = 0; i < r.int_vars.size(); ++i) {
    const auto& v = r.int_vars[i];
    double coef = 0.0;
    if (v.kind == IntVarKind::X) {
      coef = to_double(costs.outlet_cost_for(instance.stations[v.index]));
    } else {
      const auto& cand = instance.candidates[v.index];
      switch (v.kind) {
        case IntVarKind::Y2: coef = to_double(cand.outlet_cost_l2); break;
        case IntVarKind::Y3: coef = to_double(cand.outlet_cost_l3); break;
        case IntVarKind::Z2: coef = to_double(cand.open_cost_l2); break;
        case IntVarKind::Z3: coef = to_double(cand.open_cost_l3); break;
        default: break;
      }
    }
    if (coef != 0.0) r.lp.add_entry(budget, r.int_col[i], coef);
  }
  return r;
}

Relaxation build_relaxation(const Instance& instance, const IntegerBounds& bounds) {
  return build_relaxation(instance, geo::build_flow_network(instance, true), bounds);
}

Relaxation build_assignment_lp(const Instance& instance) {
  const auto network = geo::build_flow_network(instance, false);
  Relaxation r;
  r.flow_scale = flow_scale_for(network);
  const auto site_col = add_flow_part(r.lp, network, r.flow_scale);
  for (int t = 0; t < network.num_periods(); ++t) {
    for (int e = 0; e < network.num_stations(); ++e) {
      r.lp.set_bounds(site_col[t][e], 0.0, network.cap(t, network.r_arc(e)) / r.flow_scale);
    }
  }
  return r;
}

}  // namespace evcharge::lp

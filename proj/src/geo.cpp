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

#include "evcharge/geo.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <unordered_map>

namespace evcharge::geo {

namespace {

double radians(double deg) { return deg * std::numbers::pi / 180.0; }

}  // namespace

double haversine_m(const GeoPoint& a, const GeoPoint& b) {
  const double phi1 = radians(a.lat);
  const double phi2 = radians(b.lat);
  const double dphi = phi2 - phi1;
  const double dlambda = radians(b.lon - a.lon);
  const double s1 = std::sin(dphi / 2.0);
  const double s2 = std::sin(dlambda / 2.0);
  double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
  h = std::clamp(h, 0.0, 1.0);
  return 2.0 * kEarthRadiusM * std::asin(std::sqrt(h));
}

std::vector<int> feasible_stations(const ODPair& od, std::span<const Site> sites, double radius_m) {
  std::vector<int> out;
  for (int i = 0; i < static_cast<int>(sites.size()); ++i) {
    const auto& loc = sites[i].location;
    if (haversine_m(od.origin, loc) <= radius_m || haversine_m(od.destination, loc) <= radius_m) {
      out.push_back(i);
    }
  }
  return out;
}

FlowNetwork build_flow_network(const Instance& instance, bool include_candidates,
                               const PlacementPlan* plan) {
  require_valid(instance);
  if (plan != nullptr) {
    auto violations = validate_plan(instance, *plan);
    if (!violations.empty()) {
      throw InfeasiblePlan(to_string(violations.front().code) + " [" + violations.front().where +
                           "] " + violations.front().message);
    }
  }

  FlowNetwork net;
  net.num_ods_ = static_cast<int>(instance.ods.size());
  net.num_stations_ = static_cast<int>(instance.stations.size());
  net.num_candidates_ = include_candidates ? static_cast<int>(instance.candidates.size()) : 0;
  net.includes_candidates_ = include_candidates;

  std::vector<Site> sites;
  sites.reserve(net.num_sites());
  for (const auto& s : instance.stations) sites.push_back({s.id, s.location});
  if (include_candidates) {
    for (const auto& c : instance.candidates) sites.push_back({c.id, c.location});
  }
  for (const auto& od : instance.ods) net.od_ids_.push_back(od.id);
  for (const auto& s : sites) net.site_ids_.push_back(s.id);

  for (int o = 0; o < net.num_ods_; ++o) {
    net.arcs_.push_back({net.source(), net.od_node(o), ArcKind::L});
  }
  net.od_m_begin_.push_back(0);
  for (int o = 0; o < net.num_ods_; ++o) {
    for (int site : feasible_stations(instance.ods[o], sites, instance.radius_m)) {
      net.arcs_.push_back({net.od_node(o), net.site_node(site), ArcKind::M});
      net.m_od_.push_back(o);
      net.m_site_.push_back(site);
    }
    net.od_m_begin_.push_back(static_cast<int>(net.m_od_.size()));
  }
  for (int s = 0; s < net.num_sites(); ++s) {
    net.arcs_.push_back({net.site_node(s), net.sink(), s < net.num_stations_ ? ArcKind::R1 : ArcKind::R2});
  }

  // Sentinel strictly above any feasible flow value.
  net.infinite_cap_ = instance.total_demand_kw() + 1.0;

  std::unordered_map<std::string, int> added;
  std::unordered_map<std::string, OpenedStation> opened;
  if (plan != nullptr) {
    added.insert(plan->added_outlets.begin(), plan->added_outlets.end());
    opened.insert(plan->opened.begin(), plan->opened.end());
  }

  const int num_periods = instance.num_periods();
  net.cap_.assign(num_periods, std::vector<double>(net.arcs_.size(), 0.0));
  for (int t = 0; t < num_periods; ++t) {
    const double duration = instance.periods[t].duration_s;
    auto& cap = net.cap_[t];
    for (int o = 0; o < net.num_ods_; ++o) cap[net.l_arc(o)] = instance.ods[o].demand_kw[t];
    for (int k = net.m_arc_begin(); k < net.m_arc_end(); ++k) cap[k] = net.infinite_cap_;
    for (int s = 0; s < net.num_stations_; ++s) {
      const auto& st = instance.stations[s];
      int extra = 0;
      if (auto it = added.find(st.id); it != added.end()) extra = it->second;
      cap[net.r_arc(s)] = (st.outlets + extra) * st.per_outlet_kw_per_s * duration;
    }
    for (int c = 0; c < net.num_candidates_; ++c) {
      double value = 0.0;
      if (auto it = opened.find(instance.candidates[c].id); it != opened.end()) {
        value = it->second.outlets * instance.costs.new_outlet_kw(it->second.level, duration);
      }
      cap[net.r_arc(net.num_stations_ + c)] = value;
    }
  }
  return net;
}

std::vector<int> impossible_ods(const FlowNetwork& network) {
  std::vector<int> out;
  for (int o = 0; o < network.num_ods(); ++o) {
    auto [begin, end] = network.od_m_range(o);
    if (begin == end) out.push_back(o);
  }
  return out;
}

double impossible_demand_kw(const FlowNetwork& network) {
  double total = 0.0;
  for (int o : impossible_ods(network)) {
    for (int t = 0; t < network.num_periods(); ++t) total += network.cap(t, network.l_arc(o));
  }
  return total;
}

std::string to_dot(const FlowNetwork& network, int period) {
  std::ostringstream out;
  out << "digraph flow_network {\n  rankdir=LR;\n";
  out << "  n" << network.source() << " [label=\"source\"];\n";
  for (int o = 0; o < network.num_ods(); ++o) {
    out << "  n" << network.od_node(o) << " [label=\"od:" << network.od_ids()[o] << "\"];\n";
  }
  for (int s = 0; s < network.num_sites(); ++s) {
    const char* role = s < network.num_stations() ? "station:" : "candidate:";
    out << "  n" << network.site_node(s) << " [label=\"" << role << network.site_ids()[s] << "\"];\n";
  }
  out << "  n" << network.sink() << " [label=\"sink\"];\n";
  for (int a = 0; a < network.num_arcs(); ++a) {
    const auto& arc = network.arcs()[a];
    out << "  n" << arc.from << " -> n" << arc.to;
    double cap = network.cap(period, a);
    if (network.is_infinite(cap)) {
      out << " [label=\"inf\"];\n";
    } else {
      out << " [label=\"" << cap << "\"];\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace evcharge::geo

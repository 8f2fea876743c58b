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

// Walking-distance feasibility and the time-expanded flow network.
//
// Node layout is fixed: source = 0, then one node per OD, one per existing
// station, one per candidate, and the sink last. Arcs are stored L-arcs
// first (one per OD), then M-arcs (grouped by OD, sites in index order), then
// R-arcs (one per site). The topology is shared by all periods; only the
// capacities differ.

#ifndef EVCHARGE_GEO_HPP
#define EVCHARGE_GEO_HPP

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "evcharge/model.hpp"

namespace evcharge::geo {

inline constexpr double kEarthRadiusM = 6371000.0;

/// Great-circle distance on the mean Earth sphere.
double haversine_m(const GeoPoint& a, const GeoPoint& b);

struct Site {
  std::string id;
  GeoPoint location;
};

/// Indices into `sites` whose distance to the OD origin or destination is
/// at most `radius_m` (inclusive).
std::vector<int> feasible_stations(const ODPair& od, std::span<const Site> sites, double radius_m);

enum class ArcKind { L, M, R1, R2 };

struct Arc {
  int from = 0;
  int to = 0;
  ArcKind kind = ArcKind::L;
};

class FlowNetwork {
 public:
  int num_ods() const { return num_ods_; }
  int num_stations() const { return num_stations_; }
  int num_candidates() const { return num_candidates_; }
  int num_sites() const { return num_stations_ + num_candidates_; }
  int num_nodes() const { return num_ods_ + num_sites() + 2; }
  int num_periods() const { return static_cast<int>(cap_.size()); }
  bool includes_candidates() const { return includes_candidates_; }

  int source() const { return 0; }
  int sink() const { return num_nodes() - 1; }
  int od_node(int od) const { return 1 + od; }
  int site_node(int site) const { return 1 + num_ods_ + site; }
  int station_node(int station) const { return site_node(station); }
  int candidate_node(int candidate) const { return site_node(num_stations_ + candidate); }

  std::span<const Arc> arcs() const { return arcs_; }
  int num_arcs() const { return static_cast<int>(arcs_.size()); }
  int l_arc(int od) const { return od; }
  int m_arc_begin() const { return num_ods_; }
  int m_arc_end() const { return num_ods_ + num_m_arcs(); }
  int num_m_arcs() const { return static_cast<int>(m_od_.size()); }
  int r_arc(int site) const { return m_arc_end() + site; }

  /// OD index / site index of the k-th M-arc (k counted from 0).
  int m_arc_od(int k) const { return m_od_[k]; }
  int m_arc_site(int k) const { return m_site_[k]; }
  /// M-arcs leaving one OD, as [begin, end) offsets into the M-arc list.
  std::pair<int, int> od_m_range(int od) const { return {od_m_begin_[od], od_m_begin_[od + 1]}; }

  /// Per-period capacity in kW; M-arcs carry the infinite sentinel.
  double cap(int t, int arc) const { return cap_[t][arc]; }
  std::span<const double> caps(int t) const { return cap_[t]; }
  void set_cap(int t, int arc, double value) { cap_[t][arc] = value; }
  double infinite_cap() const { return infinite_cap_; }
  bool is_infinite(double cap) const { return cap >= infinite_cap_; }

  const std::vector<std::string>& od_ids() const { return od_ids_; }
  const std::vector<std::string>& site_ids() const { return site_ids_; }

  friend FlowNetwork build_flow_network(const Instance&, bool, const PlacementPlan*);

 private:
  int num_ods_ = 0;
  int num_stations_ = 0;
  int num_candidates_ = 0;
  bool includes_candidates_ = false;
  std::vector<Arc> arcs_;
  std::vector<int> m_od_;
  std::vector<int> m_site_;
  std::vector<int> od_m_begin_;
  std::vector<std::vector<double>> cap_;
  double infinite_cap_ = std::numeric_limits<double>::infinity();
  std::vector<std::string> od_ids_;
  std::vector<std::string> site_ids_;
};

/// Builds the time-expanded network. With `include_candidates`, candidate
/// sites get M-arcs from every OD within radius; their R2 capacity is zero
/// unless `plan` opens them. A plan also raises R1 capacities by the added
/// outlets. Throws InvalidInstance / InfeasiblePlan on bad input.
FlowNetwork build_flow_network(const Instance& instance, bool include_candidates,
                               const PlacementPlan* plan = nullptr);

/// OD indices with no outgoing M-arc.
std::vector<int> impossible_ods(const FlowNetwork& network);

/// Sum over periods of the L-arc capacity of impossible ODs.
double impossible_demand_kw(const FlowNetwork& network);

/// Graphviz dump of one period's network; labels encode node roles.
std::string to_dot(const FlowNetwork& network, int period);

}  // namespace evcharge::geo

#endif  // EVCHARGE_GEO_HPP

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

#include "evcharge/report.hpp"

#include <map>

namespace evcharge::report {

namespace {

double pct(double part, double total) { return total > 0.0 ? 100.0 * part / total : 0.0; }

json point_feature(const GeoPoint& p, json properties) {
  return json{{"type", "Feature"},
              {"geometry", {{"type", "Point"}, {"coordinates", {p.lon, p.lat}}}},
              {"properties", std::move(properties)}};
}

}  // namespace

json evaluation_report(const Instance& instance, const AssignmentResult& result) {
  json j;
  j["total_demand_kw"] = result.total_demand_kw;
  j["satisfied_kw"] = result.satisfied_kw;
  j["unsatisfied_kw"] = result.unsatisfied_kw;
  j["impossible_kw"] = result.impossible_kw;
  j["satisfied_pct"] = result.satisfied_pct();
  j["unsatisfied_pct"] = result.unsatisfied_pct();
  j["impossible_pct"] = result.impossible_pct();
  if (result.total_demand_kw <= 0.0) j["warning"] = "instance has no demand; satisfied reported as 100%";

  json periods = json::array();
  for (std::size_t t = 0; t < result.per_period.size(); ++t) {
    const auto& p = result.per_period[t];
    periods.push_back({{"period", t},
                       {"duration_s", instance.periods[t].duration_s},
                       {"demand_kw", p.demand_kw},
                       {"satisfied_kw", p.satisfied_kw},
                       {"unsatisfied_kw", p.unsatisfied_kw},
                       {"impossible_kw", p.impossible_kw},
                       {"demand_share_pct", pct(p.demand_kw, result.total_demand_kw)},
                       {"satisfied_pct", p.demand_kw > 0.0 ? pct(p.satisfied_kw, p.demand_kw) : 100.0}});
  }
  j["periods"] = std::move(periods);

  json ods = json::array();
  for (std::size_t o = 0; o < instance.ods.size(); ++o) {
    const double demand = instance.ods[o].total_demand_kw();
    const bool impossible = result.od_impossible[o];
    const double served = result.od_served_kw[o];
    ods.push_back({{"id", instance.ods[o].id},
                   {"demand_kw", demand},
                   {"served_kw", served},
                   {"unsatisfied_kw", impossible ? 0.0 : demand - served},
                   {"impossible_kw", impossible ? demand : 0.0}});
  }
  j["ods"] = std::move(ods);
  return j;
}

json od_points_geojson(const Instance& instance, const AssignmentResult& result) {
  struct Acc {
    GeoPoint location;
    double unsatisfied = 0.0;
    double impossible = 0.0;
    int ods = 0;
  };
  std::map<std::pair<double, double>, Acc> points;
  for (std::size_t o = 0; o < instance.ods.size(); ++o) {
    const auto& od = instance.ods[o];
    const double demand = od.total_demand_kw();
    const bool impossible = result.od_impossible[o];
    const double unsat = impossible ? 0.0 : demand - result.od_served_kw[o];
    for (const GeoPoint* p : {&od.origin, &od.destination}) {
      auto& acc = points[{p->lat, p->lon}];
      acc.location = *p;
      acc.unsatisfied += unsat / 2.0;
      acc.impossible += impossible ? demand / 2.0 : 0.0;
      ++acc.ods;
    }
  }
  json features = json::array();
  for (const auto& [key, acc] : points) {
    features.push_back(point_feature(acc.location, {{"unsatisfied_kw", acc.unsatisfied},
                                                    {"impossible_kw", acc.impossible},
                                                    {"ods", acc.ods}}));
  }
  return json{{"type", "FeatureCollection"}, {"features", std::move(features)}};
}

json plan_geojson(const Instance& instance, const PlacementPlan& plan) {
  json features = json::array();
  for (const auto& st : instance.stations) {
    auto it = plan.added_outlets.find(st.id);
    if (it == plan.added_outlets.end() || it->second == 0) continue;
    features.push_back(point_feature(st.location, {{"id", st.id},
                                                   {"kind", "expanded"},
                                                   {"level", to_int(st.level)},
                                                   {"outlets_added", it->second}}));
  }
  for (const auto& c : instance.candidates) {
    auto it = plan.opened.find(c.id);
    if (it == plan.opened.end()) continue;
    features.push_back(point_feature(c.location, {{"id", c.id},
                                                  {"kind", "new"},
                                                  {"level", to_int(it->second.level)},
                                                  {"outlets_added", it->second.outlets}}));
  }
  return json{{"type", "FeatureCollection"}, {"features", std::move(features)}};
}

json plan_json(const PlacementPlan& plan) {
  json j;
  to_json(j, plan);
  return j;
}

json sweep_table(const std::vector<placement::SweepRow>& rows, bool include_wall_time) {
  json table = json::array();
  for (const auto& row : rows) table.push_back(placement::to_json(row.result.report, include_wall_time));
  return table;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace evcharge::report

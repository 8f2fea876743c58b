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

// JSON reports and GeoJSON map layers. Percentages are always shares of the
// instance's total demand over all periods.

#ifndef EVCHARGE_REPORT_HPP
#define EVCHARGE_REPORT_HPP

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "evcharge/model.hpp"
#include "evcharge/placement.hpp"

namespace evcharge::report {

using nlohmann::json;

/// Totals, percentages, per-period table and per-OD breakdown.
json evaluation_report(const Instance& instance, const AssignmentResult& result);

/// One point feature per distinct OD endpoint; each OD contributes half of
/// its unsatisfied and impossible demand to each endpoint.
json od_points_geojson(const Instance& instance, const AssignmentResult& result);

/// Expanded stations and opened candidates, `outlets_added` per feature.
json plan_geojson(const Instance& instance, const PlacementPlan& plan);

json plan_json(const PlacementPlan& plan);

json sweep_table(const std::vector<placement::SweepRow>& rows, bool include_wall_time = true);

/// Two-space indented dump with a trailing newline.
std::string dump(const json& j);

}  // namespace evcharge::report

#endif  // EVCHARGE_REPORT_HPP

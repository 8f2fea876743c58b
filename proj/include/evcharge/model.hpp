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

// Domain types shared by every stage of the planning pipeline.
//
// All charging quantities are expressed in "kW per period", i.e. the product
// of a kW/s rate and a duration in seconds, so that demand and supply can be
// compared directly on a flow network. Station supply is never stored: it is
// recomputed from the outlet count and the per-outlet rate.

#ifndef EVCHARGE_MODEL_HPP
#define EVCHARGE_MODEL_HPP

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "evcharge/common.hpp"

namespace evcharge {

struct Period {
  int index = 0;
  double duration_s = kDayHorizonSeconds;

  bool operator==(const Period&) const = default;
};

/// One 24 h period, or four 6 h periods.
std::vector<Period> single_period_preset();
std::vector<Period> six_hour_preset();
/// `count` equal periods covering `horizon_s`.
std::vector<Period> uniform_periods(int count, double horizon_s = kDayHorizonSeconds);

struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;

  bool operator==(const GeoPoint&) const = default;
};

bool is_valid(const GeoPoint& p);

enum class Level : int { L2 = 2, L3 = 3 };

std::optional<Level> level_from_int(int value);
inline int to_int(Level level) { return static_cast<int>(level); }

struct ODPair {
  std::string id;
  GeoPoint origin;
  GeoPoint destination;
  std::pair<std::string, std::string> borough_pair;
  std::vector<double> demand_kw;  // one entry per period

  double total_demand_kw() const;

  bool operator==(const ODPair&) const = default;
};

struct Station {
  std::string id;
  GeoPoint location;
  Level level = Level::L2;
  int outlets = 1;
  double per_outlet_kw_per_s = 1.0;
  int max_outlets = 16;

  /// C_e for a period of the given length.
  double capacity_kw(double duration_s) const {
    return outlets * per_outlet_kw_per_s * duration_s;
  }
  int expandable_outlets() const { return max_outlets - outlets; }

  bool operator==(const Station&) const = default;
};

struct CandidateLocation {
  std::string id;
  GeoPoint location;
  Cost open_cost_l2 = 10;
  Cost open_cost_l3 = 100;
  Cost outlet_cost_l2 = 1;
  Cost outlet_cost_l3 = 2;

  const Cost& open_cost(Level level) const {
    return level == Level::L2 ? open_cost_l2 : open_cost_l3;
  }
  const Cost& outlet_cost(Level level) const {
    return level == Level::L2 ? outlet_cost_l2 : outlet_cost_l3;
  }

  bool operator==(const CandidateLocation&) const = default;
};

struct CostSchedule {
  Cost budget = 0;
  // K_e defaults by level; `add_outlet_cost` overrides per station id.
  Cost existing_outlet_cost_l2 = 1;
  Cost existing_outlet_cost_l3 = 2;
  std::map<std::string, Cost> add_outlet_cost;
  // Per-outlet rate of a newly built station; Q^(l) = rate * duration.
  double new_outlet_kw_per_s_l2 = 1.0;
  double new_outlet_kw_per_s_l3 = 1.0;
  int max_outlets_l2 = 16;  // Y^(2)
  int max_outlets_l3 = 7;   // Y^(3)

  Cost outlet_cost_for(const Station& station) const;
  double new_outlet_kw_per_s(Level level) const {
    return level == Level::L2 ? new_outlet_kw_per_s_l2 : new_outlet_kw_per_s_l3;
  }
  double new_outlet_kw(Level level, double duration_s) const {
    return new_outlet_kw_per_s(level) * duration_s;
  }
  int max_new_outlets(Level level) const {
    return level == Level::L2 ? max_outlets_l2 : max_outlets_l3;
  }

  bool operator==(const CostSchedule&) const = default;
};

struct Instance {
  std::vector<Period> periods = single_period_preset();
  std::vector<ODPair> ods;
  std::vector<Station> stations;
  std::vector<CandidateLocation> candidates;
  CostSchedule costs;
  double radius_m = 400.0;
  double horizon_s = kDayHorizonSeconds;

  int num_periods() const { return static_cast<int>(periods.size()); }
  /// Sum over periods and ODs of A_e^t.
  double total_demand_kw() const;
  double period_demand_kw(int t) const;

  bool operator==(const Instance&) const = default;
};

/// Per-period flows of one max-flow solve, indexed like the flow network's
/// L, M and R arc lists.
struct PeriodAssignment {
  double demand_kw = 0.0;
  double satisfied_kw = 0.0;
  double unsatisfied_kw = 0.0;
  double impossible_kw = 0.0;
  std::vector<double> od_flow_kw;    // a_e^t, one per OD
  std::vector<double> arc_flow_kw;   // b_e^t, one per M-arc
  std::vector<double> site_flow_kw;  // c_e^t then d_e^t, stations then candidates

  bool operator==(const PeriodAssignment&) const = default;
};

struct AssignmentResult {
  double total_demand_kw = 0.0;
  double satisfied_kw = 0.0;
  double unsatisfied_kw = 0.0;
  double impossible_kw = 0.0;
  std::vector<PeriodAssignment> per_period;
  /// (od index, site index) of each M-arc; sites are stations then candidates.
  std::vector<std::pair<int, int>> m_arcs;
  std::vector<bool> od_impossible;
  std::vector<double> od_served_kw;  // summed over periods

  /// Share of total demand; 100 by convention when there is no demand.
  double satisfied_pct() const;
  double unsatisfied_pct() const;
  double impossible_pct() const;

  bool operator==(const AssignmentResult&) const = default;
};

struct OpenedStation {
  Level level = Level::L2;
  int outlets = 1;

  bool operator==(const OpenedStation&) const = default;
};

struct PlacementPlan {
  std::map<std::string, int> added_outlets;      // station id -> x_e
  std::map<std::string, OpenedStation> opened;   // candidate id -> (level, y)
  Cost total_cost = 0;

  bool empty() const { return added_outlets.empty() && opened.empty(); }

  bool operator==(const PlacementPlan&) const = default;
};

/// Exact cost of a plan under the instance's cost schedule.
Cost plan_cost(const Instance& instance, const PlacementPlan& plan);

/// Drops zero entries and recomputes total_cost.
PlacementPlan normalized(const Instance& instance, PlacementPlan plan);

enum class ViolationCode {
  EmptyPeriods,
  PeriodIndexGap,
  NonPositiveDuration,
  HorizonMismatch,
  InvalidRadius,
  DuplicateId,
  InvalidGeoPoint,
  DemandPeriodMismatch,
  NegativeDemand,
  NonFiniteDemand,
  InvalidOutletCount,
  OutletsExceedMax,
  NonPositiveOutletRate,
  NegativeCost,
  NegativeBudget,
  NonPositiveNewOutletRate,
  InvalidOutletCap,
  UnknownStation,
  UnknownCandidate,
  PlanOutletsExceedMax,
  PlanOutletCountInvalid,
  BudgetExceeded,
};

std::string to_string(ViolationCode code);

struct Violation {
  ViolationCode code;
  std::string where;  // id or path of the offending item
  std::string message;

  bool operator==(const Violation&) const = default;
};

/// Every invariant violation of the instance; empty iff well-formed.
std::vector<Violation> validate(const Instance& instance);

/// Violations of a placement plan against the instance's bounds and budget.
std::vector<Violation> validate_plan(const Instance& instance, const PlacementPlan& plan);

/// Throws InvalidInstance listing the violations, if any.
void require_valid(const Instance& instance);

// JSON (de)serialization. Costs are written as integers when integral and as
// "p/q" strings otherwise; both forms (and plain decimals) are accepted.

void to_json(nlohmann::json& j, const Period& v);
void from_json(const nlohmann::json& j, Period& v);
void to_json(nlohmann::json& j, const GeoPoint& v);
void from_json(const nlohmann::json& j, GeoPoint& v);
void to_json(nlohmann::json& j, const ODPair& v);
void from_json(const nlohmann::json& j, ODPair& v);
void to_json(nlohmann::json& j, const Station& v);
void from_json(const nlohmann::json& j, Station& v);
void to_json(nlohmann::json& j, const CandidateLocation& v);
void from_json(const nlohmann::json& j, CandidateLocation& v);
void to_json(nlohmann::json& j, const CostSchedule& v);
void from_json(const nlohmann::json& j, CostSchedule& v);
void to_json(nlohmann::json& j, const Instance& v);
void from_json(const nlohmann::json& j, Instance& v);
void to_json(nlohmann::json& j, const PlacementPlan& v);
void from_json(const nlohmann::json& j, PlacementPlan& v);
void to_json(nlohmann::json& j, const PeriodAssignment& v);
void from_json(const nlohmann::json& j, PeriodAssignment& v);
void to_json(nlohmann::json& j, const AssignmentResult& v);
void from_json(const nlohmann::json& j, AssignmentResult& v);
void to_json(nlohmann::json& j, const Violation& v);

nlohmann::json cost_to_json(const Cost& cost);
Cost cost_from_json(const nlohmann::json& j);

/// Reads an instance file; throws InputError on unreadable or malformed JSON.
Instance load_instance(const std::string& path);
void save_instance(const Instance& instance, const std::string& path);

}  // namespace evcharge

#endif  // EVCHARGE_MODEL_HPP

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

#include "evcharge/model.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

namespace evcharge {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Rationals

namespace {

// cpp_int reads a leading 0 as an octal prefix.
boost::multiprecision::cpp_int parse_integer(std::string digits) {
  bool negative = false;
  if (!digits.empty() && (digits[0] == '-' || digits[0] == '+')) {
    negative = digits[0] == '-';
    digits.erase(0, 1);
  }
  if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
    throw InputError("BadNumber", "not an integer: '" + digits + "'");
  }
  digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size() - 1));
  boost::multiprecision::cpp_int value(digits);
  return negative ? boost::multiprecision::cpp_int(-value) : value;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  std::string s = text;
  s.erase(0, s.find_first_not_of(" \t"));
  s.erase(s.find_last_not_of(" \t\r\n") + 1);
  if (s.empty()) throw InputError("BadNumber", "empty number");
  try {
    if (auto slash = s.find('/'); slash != std::string::npos) {
      const auto num = parse_integer(s.substr(0, slash));
      const auto den = parse_integer(s.substr(slash + 1));
      if (den == 0) throw InputError("BadNumber", "zero denominator in '" + s + "'");
      return Rational(num, den);
    }
    bool negative = false;
    std::string body = s;
    if (body[0] == '-' || body[0] == '+') {
      negative = body[0] == '-';
      body = body.substr(1);
    }
    if (body.find_first_of("eE") != std::string::npos) {
      return to_rational(std::stod(s));
    }
    auto dot = body.find('.');
    std::string digits = body;
    boost::multiprecision::cpp_int den = 1;
    if (dot != std::string::npos) {
      std::string frac = body.substr(dot + 1);
      digits = body.substr(0, dot) + frac;
      for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    }
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
      throw InputError("BadNumber", "not a number: '" + s + "'");
    }
    auto num = parse_integer(digits);
    if (negative) num = -num;
    return Rational(num, den);
  } catch (const InputError&) {
    throw;
  } catch (const std::exception&) {
    throw InputError("BadNumber", "not a number: '" + s + "'");
  }
}

Rational to_rational(double value) {
  if (!std::isfinite(value)) throw InputError("BadNumber", "non-finite value");
  return Rational(value);
}

Rational decimal_rational(double value) {
  if (!std::isfinite(value)) throw InputError("BadNumber", "non-finite value");
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) return Rational(value);
  return parse_rational(std::string(buf, end));
}

std::string to_string(const Rational& value) {
  if (denominator(value) == 1) return numerator(value).str();
  return numerator(value).str() + "/" + denominator(value).str();
}

// ---------------------------------------------------------------------------
// Periods and points

std::vector<Period> single_period_preset() { return uniform_periods(1); }
std::vector<Period> six_hour_preset() { return uniform_periods(4); }

std::vector<Period> uniform_periods(int count, double horizon_s) {
  std::vector<Period> out;
  out.reserve(count);
  for (int t = 0; t < count; ++t) out.push_back({t, horizon_s / count});
  return out;
}

bool is_valid(const GeoPoint& p) {
  return std::isfinite(p.lat) && std::isfinite(p.lon) && p.lat >= -90.0 && p.lat <= 90.0 &&
         p.lon >= -180.0 && p.lon <= 180.0;
}

std::optional<Level> level_from_int(int value) {
  if (value == 2) return Level::L2;
  if (value == 3) return Level::L3;
  return std::nullopt;
}

double ODPair::total_demand_kw() const {
  return std::accumulate(demand_kw.begin(), demand_kw.end(), 0.0);
}

Cost CostSchedule::outlet_cost_for(const Station& station) const {
  if (auto it = add_outlet_cost.find(station.id); it != add_outlet_cost.end()) return it->second;
  return station.level == Level::L2 ? existing_outlet_cost_l2 : existing_outlet_cost_l3;
}

double Instance::total_demand_kw() const {
  double total = 0.0;
  for (const auto& od : ods) total += od.total_demand_kw();
  return total;
}

double Instance::period_demand_kw(int t) const {
  double total = 0.0;
  for (const auto& od : ods) {
    if (t < static_cast<int>(od.demand_kw.size())) total += od.demand_kw[t];
  }
  return total;
}

namespace {

double pct(double part, double total) {
  return total > 0.0 ? 100.0 * part / total : 0.0;
}

}  // namespace

double AssignmentResult::satisfied_pct() const {
  return total_demand_kw > 0.0 ? pct(satisfied_kw, total_demand_kw) : 100.0;
}
double AssignmentResult::unsatisfied_pct() const { return pct(unsatisfied_kw, total_demand_kw); }
double AssignmentResult::impossible_pct() const { return pct(impossible_kw, total_demand_kw); }

// ---------------------------------------------------------------------------
// Plans

Cost plan_cost(const Instance& instance, const PlacementPlan& plan) {
  Cost total = 0;
  for (const auto& station : instance.stations) {
    if (auto it = plan.added_outlets.find(station.id); it != plan.added_outlets.end()) {
      total += instance.costs.outlet_cost_for(station) * it->second;
    }
  }
  for (const auto& cand : instance.candidates) {
    if (auto it = plan.opened.find(cand.id); it != plan.opened.end()) {
      total += cand.open_cost(it->second.level) + cand.outlet_cost(it->second.level) * it->second.outlets;
    }
  }
  return total;
}

PlacementPlan normalized(const Instance& instance, PlacementPlan plan) {
  std::erase_if(plan.added_outlets, [](const auto& kv) { return kv.second == 0; });
  std::erase_if(plan.opened, [](const auto& kv) { return kv.second.outlets == 0; });
  plan.total_cost = plan_cost(instance, plan);
  return plan;
}

std::string to_string(ViolationCode code) {
  switch (code) {
    case ViolationCode::EmptyPeriods: return "EmptyPeriods";
    case ViolationCode::PeriodIndexGap: return "PeriodIndexGap";
    case ViolationCode::NonPositiveDuration: return "NonPositiveDuration";
    case ViolationCode::HorizonMismatch: return "HorizonMismatch";
    case ViolationCode::InvalidRadius: return "InvalidRadius";
    case ViolationCode::DuplicateId: return "DuplicateId";
    case ViolationCode::InvalidGeoPoint: return "InvalidGeoPoint";
    case ViolationCode::DemandPeriodMismatch: return "DemandPeriodMismatch";
    case ViolationCode::NegativeDemand: return "NegativeDemand";
    case ViolationCode::NonFiniteDemand: return "NonFiniteDemand";
    case ViolationCode::InvalidOutletCount: return "InvalidOutletCount";
    case ViolationCode::OutletsExceedMax: return "OutletsExceedMax";
    case ViolationCode::NonPositiveOutletRate: return "NonPositiveOutletRate";
    case ViolationCode::NegativeCost: return "NegativeCost";
    case ViolationCode::NegativeBudget: return "NegativeBudget";
    case ViolationCode::NonPositiveNewOutletRate: return "NonPositiveNewOutletRate";
    case ViolationCode::InvalidOutletCap: return "InvalidOutletCap";
    case ViolationCode::UnknownStation: return "UnknownStation";
    case ViolationCode::UnknownCandidate: return "UnknownCandidate";
    case ViolationCode::PlanOutletsExceedMax: return "PlanOutletsExceedMax";
    case ViolationCode::PlanOutletCountInvalid: return "PlanOutletCountInvalid";
    case ViolationCode::BudgetExceeded: return "BudgetExceeded";
  }
  return "Unknown";
}

// ---------------------------------------------------------------------------
// Validation

namespace {

class ViolationSink {
 public:
  void add(ViolationCode code, std::string where, std::string message) {
    out_.push_back({code, std::move(where), std::move(message)});
  }
  std::vector<Violation> take() { return std::move(out_); }

 private:
  std::vector<Violation> out_;
};

template <typename Range>
void check_unique_ids(const Range& items, const std::string& collection, ViolationSink& sink) {
  std::set<std::string> seen;
  for (const auto& item : items) {
    if (!seen.insert(item.id).second) {
      sink.add(ViolationCode::DuplicateId, collection + "/" + item.id, "duplicate id");
    }
  }
}

void check_cost(const Cost& cost, const std::string& where, ViolationSink& sink) {
  if (cost < 0) sink.add(ViolationCode::NegativeCost, where, "cost " + to_string(cost) + " < 0");
}

}  // namespace

std::vector<Violation> validate(const Instance& instance) {
  ViolationSink sink;

  if (instance.periods.empty()) sink.add(ViolationCode::EmptyPeriods, "periods", "no periods");
  double horizon = 0.0;
  for (std::size_t t = 0; t < instance.periods.size(); ++t) {
    const auto& period = instance.periods[t];
    if (period.index != static_cast<int>(t)) {
      sink.add(ViolationCode::PeriodIndexGap, "periods/" + std::to_string(t),
               "index " + std::to_string(period.index) + " at position " + std::to_string(t));
    }
    if (!(period.duration_s > 0.0) || !std::isfinite(period.duration_s)) {
      sink.add(ViolationCode::NonPositiveDuration, "periods/" + std::to_string(t),
               "duration must be positive");
    }
    horizon += period.duration_s;
  }
  if (!instance.periods.empty() &&
      std::abs(horizon - instance.horizon_s) > 1e-9 * std::max(1.0, instance.horizon_s)) {
    sink.add(ViolationCode::HorizonMismatch, "periods",
             "durations sum to " + std::to_string(horizon) + " s, horizon is " +
                 std::to_string(instance.horizon_s) + " s");
  }
  if (!(instance.radius_m > 0.0) || !std::isfinite(instance.radius_m)) {
    sink.add(ViolationCode::InvalidRadius, "radius_m", "radius must be positive");
  }

  check_unique_ids(instance.ods, "ods", sink);
  check_unique_ids(instance.stations, "stations", sink);
  check_unique_ids(instance.candidates, "candidates", sink);

  const std::size_t num_periods = instance.periods.size();
  for (const auto& od : instance.ods) {
    const std::string where = "ods/" + od.id;
    if (!is_valid(od.origin) || !is_valid(od.destination)) {
      sink.add(ViolationCode::InvalidGeoPoint, where, "endpoint out of range");
    }
    if (od.demand_kw.size() != num_periods) {
      sink.add(ViolationCode::DemandPeriodMismatch, where,
               std::to_string(od.demand_kw.size()) + " demand entries for " +
                   std::to_string(num_periods) + " periods");
    }
    for (double d : od.demand_kw) {
      if (!std::isfinite(d)) {
        sink.add(ViolationCode::NonFiniteDemand, where, "non-finite demand");
      } else if (d < 0.0) {
        sink.add(ViolationCode::NegativeDemand, where, "negative demand");
      }
    }
  }

  for (const auto& st : instance.stations) {
    const std::string where = "stations/" + st.id;
    if (!is_valid(st.location)) sink.add(ViolationCode::InvalidGeoPoint, where, "location out of range");
    if (st.outlets < 1) sink.add(ViolationCode::InvalidOutletCount, where, "outlets must be >= 1");
    if (st.outlets > st.max_outlets) {
      sink.add(ViolationCode::OutletsExceedMax, where, "outlets exceed max_outlets");
    }
    if (!(st.per_outlet_kw_per_s > 0.0) || !std::isfinite(st.per_outlet_kw_per_s)) {
      sink.add(ViolationCode::NonPositiveOutletRate, where, "per-outlet rate must be positive");
    }
    if (auto it = instance.costs.add_outlet_cost.find(st.id); it != instance.costs.add_outlet_cost.end()) {
      check_cost(it->second, "costs/add_outlet_cost/" + st.id, sink);
    }
  }
  for (const auto& [id, cost] : instance.costs.add_outlet_cost) {
    bool known = std::any_of(instance.stations.begin(), instance.stations.end(),
                             [&](const Station& s) { return s.id == id; });
    if (!known) sink.add(ViolationCode::UnknownStation, "costs/add_outlet_cost/" + id, "no such station");
  }

  for (const auto& c : instance.candidates) {
    const std::string where = "candidates/" + c.id;
    if (!is_valid(c.location)) sink.add(ViolationCode::InvalidGeoPoint, where, "location out of range");
    check_cost(c.open_cost_l2, where + "/open_cost_l2", sink);
    check_cost(c.open_cost_l3, where + "/open_cost_l3", sink);
    check_cost(c.outlet_cost_l2, where + "/outlet_cost_l2", sink);
    check_cost(c.outlet_cost_l3, where + "/outlet_cost_l3", sink);
  }

  const auto& costs = instance.costs;
  if (costs.budget < 0) sink.add(ViolationCode::NegativeBudget, "costs/budget", "budget < 0");
  check_cost(costs.existing_outlet_cost_l2, "costs/existing_outlet_cost_l2", sink);
  check_cost(costs.existing_outlet_cost_l3, "costs/existing_outlet_cost_l3", sink);
  if (!(costs.new_outlet_kw_per_s_l2 > 0.0) || !(costs.new_outlet_kw_per_s_l3 > 0.0) ||
      !std::isfinite(costs.new_outlet_kw_per_s_l2) || !std::isfinite(costs.new_outlet_kw_per_s_l3)) {
    sink.add(ViolationCode::NonPositiveNewOutletRate, "costs", "new outlet rates must be positive");
  }
  if (costs.max_outlets_l2 < 1 || costs.max_outlets_l3 < 1) {
    sink.add(ViolationCode::InvalidOutletCap, "costs", "Y^(2), Y^(3) must be >= 1");
  }
  return sink.take();
}

std::vector<Violation> validate_plan(const Instance& instance, const PlacementPlan& plan) {
  ViolationSink sink;
  for (const auto& [id, x] : plan.added_outlets) {
    auto it = std::find_if(instance.stations.begin(), instance.stations.end(),
                           [&](const Station& s) { return s.id == id; });
    if (it == instance.stations.end()) {
      sink.add(ViolationCode::UnknownStation, "added_outlets/" + id, "no such station");
      continue;
    }
    if (x < 0) sink.add(ViolationCode::PlanOutletCountInvalid, "added_outlets/" + id, "negative outlets");
    if (x > it->expandable_outlets()) {
      sink.add(ViolationCode::PlanOutletsExceedMax, "added_outlets/" + id,
               std::to_string(x) + " > " + std::to_string(it->expandable_outlets()));
    }
  }
  for (const auto& [id, open] : plan.opened) {
    bool known = std::any_of(instance.candidates.begin(), instance.candidates.end(),
                             [&](const CandidateLocation& c) { return c.id == id; });
    if (!known) {
      sink.add(ViolationCode::UnknownCandidate, "opened/" + id, "no such candidate");
      continue;
    }
    if (open.outlets < 1 || open.outlets > instance.costs.max_new_outlets(open.level)) {
      sink.add(ViolationCode::PlanOutletCountInvalid, "opened/" + id,
               "outlets must be in [1, " + std::to_string(instance.costs.max_new_outlets(open.level)) + "]");
    }
  }
  Cost cost = plan_cost(instance, plan);
  if (cost > instance.costs.budget) {
    sink.add(ViolationCode::BudgetExceeded, "plan",
             "cost " + to_string(cost) + " exceeds budget " + to_string(instance.costs.budget));
  }
  return sink.take();
}

void require_valid(const Instance& instance) {
  auto violations = validate(instance);
  if (violations.empty()) return;
  std::ostringstream msg;
  msg << violations.size() << " instance violation(s):";
  for (const auto& v : violations) msg << "\n  " << to_string(v.code) << " [" << v.where << "] " << v.message;
  throw InvalidInstance(msg.str());
}

// ---------------------------------------------------------------------------
// JSON

json cost_to_json(const Cost& cost) {
  if (denominator(cost) == 1) {
    const auto& num = numerator(cost);
    if (num >= std::numeric_limits<std::int64_t>::min() && num <= std::numeric_limits<std::int64_t>::max()) {
      return json(num.convert_to<std::int64_t>());
    }
  }
  return json(to_string(cost));
}

Cost cost_from_json(const json& j) {
  if (j.is_number_integer()) return Cost(j.get<std::int64_t>());
  if (j.is_number_float()) return parse_rational(j.dump());
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw InputError("BadCost", "cost must be a number or a \"p/q\" string");
}

namespace {

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (auto it = j.find(key); it != j.end()) return it->get<T>();
  return fallback;
}

Cost cost_or(const json& j, const char* key, Cost fallback) {
  if (auto it = j.find(key); it != j.end()) return cost_from_json(*it);
  return fallback;
}

}  // namespace

void to_json(json& j, const Period& v) { j = json{{"index", v.index}, {"duration_s", v.duration_s}}; }
void from_json(const json& j, Period& v) {
  v.index = j.at("index").get<int>();
  v.duration_s = j.at("duration_s").get<double>();
}

void to_json(json& j, const GeoPoint& v) { j = json{{"lat", v.lat}, {"lon", v.lon}}; }
void from_json(const json& j, GeoPoint& v) {
  v.lat = j.at("lat").get<double>();
  v.lon = j.at("lon").get<double>();
}

void to_json(json& j, const ODPair& v) {
  j = json{{"id", v.id},
           {"origin", v.origin},
           {"destination", v.destination},
           {"borough_pair", json::array({v.borough_pair.first, v.borough_pair.second})},
           {"demand_kw", v.demand_kw}};
}
void from_json(const json& j, ODPair& v) {
  v.id = j.at("id").get<std::string>();
  v.origin = j.at("origin").get<GeoPoint>();
  v.destination = j.at("destination").get<GeoPoint>();
  if (auto it = j.find("borough_pair"); it != j.end()) {
    v.borough_pair = {it->at(0).get<std::string>(), it->at(1).get<std::string>()};
  }
  v.demand_kw = j.at("demand_kw").get<std::vector<double>>();
}

void to_json(json& j, const Station& v) {
  j = json{{"id", v.id},
           {"location", v.location},
           {"level", to_int(v.level)},
           {"outlets", v.outlets},
           {"per_outlet_kw_per_s", v.per_outlet_kw_per_s},
           {"max_outlets", v.max_outlets}};
}
void from_json(const json& j, Station& v) {
  v.id = j.at("id").get<std::string>();
  v.location = j.at("location").get<GeoPoint>();
  auto level = level_from_int(j.at("level").get<int>());
  if (!level) throw InputError("BadLevel", "station " + v.id + ": level must be 2 or 3");
  v.level = *level;
  v.outlets = j.at("outlets").get<int>();
  v.per_outlet_kw_per_s = j.at("per_outlet_kw_per_s").get<double>();
  v.max_outlets = get_or(j, "max_outlets", v.level == Level::L2 ? 16 : 7);
}

void to_json(json& j, const CandidateLocation& v) {
  j = json{{"id", v.id},
           {"location", v.location},
           {"open_cost_l2", cost_to_json(v.open_cost_l2)},
           {"open_cost_l3", cost_to_json(v.open_cost_l3)},
           {"outlet_cost_l2", cost_to_json(v.outlet_cost_l2)},
           {"outlet_cost_l3", cost_to_json(v.outlet_cost_l3)}};
}
void from_json(const json& j, CandidateLocation& v) {
  CandidateLocation d;
  v.id = j.at("id").get<std::string>();
  v.location = j.at("location").get<GeoPoint>();
  v.open_cost_l2 = cost_or(j, "open_cost_l2", d.open_cost_l2);
  v.open_cost_l3 = cost_or(j, "open_cost_l3", d.open_cost_l3);
  v.outlet_cost_l2 = cost_or(j, "outlet_cost_l2", d.outlet_cost_l2);
  v.outlet_cost_l3 = cost_or(j, "outlet_cost_l3", d.outlet_cost_l3);
}

void to_json(json& j, const CostSchedule& v) {
  json overrides = json::object();
  for (const auto& [id, cost] : v.add_outlet_cost) overrides[id] = cost_to_json(cost);
  j = json{{"budget", cost_to_json(v.budget)},
           {"existing_outlet_cost_l2", cost_to_json(v.existing_outlet_cost_l2)},
           {"existing_outlet_cost_l3", cost_to_json(v.existing_outlet_cost_l3)},
           {"add_outlet_cost", overrides},
           {"new_outlet_kw_per_s_l2", v.new_outlet_kw_per_s_l2},
           {"new_outlet_kw_per_s_l3", v.new_outlet_kw_per_s_l3},
           {"max_outlets_l2", v.max_outlets_l2},
           {"max_outlets_l3", v.max_outlets_l3}};
}
void from_json(const json& j, CostSchedule& v) {
  CostSchedule d;
  v.budget = cost_or(j, "budget", d.budget);
  v.existing_outlet_cost_l2 = cost_or(j, "existing_outlet_cost_l2", d.existing_outlet_cost_l2);
  v.existing_outlet_cost_l3 = cost_or(j, "existing_outlet_cost_l3", d.existing_outlet_cost_l3);
  v.add_outlet_cost.clear();
  if (auto it = j.find("add_outlet_cost"); it != j.end()) {
    for (const auto& [id, cost] : it->items()) v.add_outlet_cost[id] = cost_from_json(cost);
  }
  v.new_outlet_kw_per_s_l2 = get_or(j, "new_outlet_kw_per_s_l2", d.new_outlet_kw_per_s_l2);
  v.new_outlet_kw_per_s_l3 = get_or(j, "new_outlet_kw_per_s_l3", d.new_outlet_kw_per_s_l3);
  v.max_outlets_l2 = get_or(j, "max_outlets_l2", d.max_outlets_l2);
  v.max_outlets_l3 = get_or(j, "max_outlets_l3", d.max_outlets_l3);
}

void to_json(json& j, const Instance& v) {
  j = json{{"periods", v.periods},
           {"ods", v.ods},
           {"stations", v.stations},
           {"candidates", v.candidates},
           {"costs", v.costs},
           {"radius_m", v.radius_m}};
  if (v.horizon_s != kDayHorizonSeconds) j["horizon_s"] = v.horizon_s;
}
void from_json(const json& j, Instance& v) {
  v.periods = j.at("periods").get<std::vector<Period>>();
  v.ods = get_or(j, "ods", std::vector<ODPair>{});
  v.stations = get_or(j, "stations", std::vector<Station>{});
  v.candidates = get_or(j, "candidates", std::vector<CandidateLocation>{});
  v.costs = get_or(j, "costs", CostSchedule{});
  v.radius_m = j.at("radius_m").get<double>();
  v.horizon_s = get_or(j, "horizon_s", kDayHorizonSeconds);
}

void to_json(json& j, const PlacementPlan& v) {
  json added = json::object();
  for (const auto& [id, x] : v.added_outlets) added[id] = x;
  json opened = json::object();
  for (const auto& [id, o] : v.opened) opened[id] = json{{"level", to_int(o.level)}, {"outlets", o.outlets}};
  j = json{{"added_outlets", added}, {"opened", opened}, {"total_cost", cost_to_json(v.total_cost)}};
}
void from_json(const json& j, PlacementPlan& v) {
  v.added_outlets.clear();
  v.opened.clear();
  if (auto it = j.find("added_outlets"); it != j.end()) {
    for (const auto& [id, x] : it->items()) v.added_outlets[id] = x.get<int>();
  }
  if (auto it = j.find("opened"); it != j.end()) {
    for (const auto& [id, o] : it->items()) {
      auto level = level_from_int(o.at("level").get<int>());
      if (!level) throw InputError("BadLevel", "opened " + id + ": level must be 2 or 3");
      v.opened[id] = OpenedStation{*level, o.at("outlets").get<int>()};
    }
  }
  v.total_cost = cost_or(j, "total_cost", Cost(0));
}

void to_json(json& j, const PeriodAssignment& v) {
  j = json{{"demand_kw", v.demand_kw},       {"satisfied_kw", v.satisfied_kw},
           {"unsatisfied_kw", v.unsatisfied_kw}, {"impossible_kw", v.impossible_kw},
           {"od_flow_kw", v.od_flow_kw},     {"arc_flow_kw", v.arc_flow_kw},
           {"site_flow_kw", v.site_flow_kw}};
}
void from_json(const json& j, PeriodAssignment& v) {
  v.demand_kw = j.at("demand_kw").get<double>();
  v.satisfied_kw = j.at("satisfied_kw").get<double>();
  v.unsatisfied_kw = j.at("unsatisfied_kw").get<double>();
  v.impossible_kw = j.at("impossible_kw").get<double>();
  v.od_flow_kw = j.at("od_flow_kw").get<std::vector<double>>();
  v.arc_flow_kw = j.at("arc_flow_kw").get<std::vector<double>>();
  v.site_flow_kw = j.at("site_flow_kw").get<std::vector<double>>();
}

void to_json(json& j, const AssignmentResult& v) {
  j = json{{"total_demand_kw", v.total_demand_kw},
           {"satisfied_kw", v.satisfied_kw},
           {"unsatisfied_kw", v.unsatisfied_kw},
           {"impossible_kw", v.impossible_kw},
           {"per_period", v.per_period},
           {"m_arcs", v.m_arcs},
           {"od_impossible", v.od_impossible},
           {"od_served_kw", v.od_served_kw}};
}
void from_json(const json& j, AssignmentResult& v) {
  v.total_demand_kw = j.at("total_demand_kw").get<double>();
  v.satisfied_kw = j.at("satisfied_kw").get<double>();
  v.unsatisfied_kw = j.at("unsatisfied_kw").get<double>();
  v.impossible_kw = j.at("impossible_kw").get<double>();
  v.per_period = j.at("per_period").get<std::vector<PeriodAssignment>>();
  v.m_arcs = j.at("m_arcs").get<std::vector<std::pair<int, int>>>();
  v.od_impossible = j.at("od_impossible").get<std::vector<bool>>();
  v.od_served_kw = j.at("od_served_kw").get<std::vector<double>>();
}

void to_json(json& j, const Violation& v) {
  j = json{{"code", to_string(v.code)}, {"where", v.where}, {"message", v.message}};
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("FileNotFound", "cannot open " + path);
  try {
    json j = json::parse(in);
    return j.get<Instance>();
  } catch (const json::exception& e) {
    throw InputError("BadInstanceJson", path + ": " + e.what());
  }
}

void save_instance(const Instance& instance, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("FileNotWritable", "cannot write " + path);
  out << json(instance).dump(2) << '\n';
}

}  // namespace evcharge

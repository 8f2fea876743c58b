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


#include <sstream>

#include "doctest.h"
#include "evcharge/model.hpp"
#include "fixtures.hpp"

using namespace evcharge;

namespace {

bool has(const std::vector<Violation>& v, ViolationCode code) {
  for (const auto& x : v) {
    if (x.code == code) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("rationals parse decimals and fractions exactly") {
  CHECK(parse_rational("0.25") == Rational(1, 4));
  CHECK(parse_rational("0.75") == Rational(3, 4));
  CHECK(parse_rational("-1.5") == Rational(-3, 2));
  CHECK(parse_rational("07/3") == Rational(7, 3));
  CHECK(parse_rational(" 12 ") == Rational(12));
  CHECK(parse_rational("1e2") == Rational(100));
  CHECK_THROWS_AS(parse_rational("abc"), InputError);
  CHECK_THROWS_AS(parse_rational("1/0"), InputError);
  CHECK(to_string(Rational(7, 3)) == "7/3");
  CHECK(parse_rational(to_string(Rational(-22, 7))) == Rational(-22, 7));
}

TEST_CASE("decimal_rational uses the shortest decimal spelling") {
  CHECK(decimal_rational(0.1) == Rational(1, 10));
  CHECK(decimal_rational(0.25) == Rational(1, 4));
  CHECK(decimal_rational(350.0) == Rational(350));
  CHECK(to_rational(0.1) != Rational(1, 10));
  CHECK(to_double(to_rational(0.1)) == 0.1);
}

TEST_CASE("period presets") {
  CHECK(single_period_preset().size() == 1);
  const auto six = six_hour_preset();
  REQUIRE(six.size() == 4);
  for (int t = 0; t < 4; ++t) {
    CHECK(six[t].index == t);
    CHECK(six[t].duration_s == 21600.0);
  }
}

TEST_CASE("the worked example is a valid instance") {
  const auto inst = fixtures::worked_instance();
  CHECK(validate(inst).empty());
  CHECK(inst.ods.size() == 3);
  CHECK(inst.stations.size() == 2);
}

TEST_CASE("validation reports each broken invariant") {
  auto base = fixtures::worked_instance();

  auto inst = base;
  inst.ods[0].demand_kw.push_back(1.0);
  CHECK(has(validate(inst), ViolationCode::DemandPeriodMismatch));

  inst = base;
  inst.costs.budget = -1;
  CHECK(has(validate(inst), ViolationCode::NegativeBudget));

  inst = base;
  inst.ods[1].demand_kw[0] = -3.0;
  CHECK(has(validate(inst), ViolationCode::NegativeDemand));

  inst = base;
  inst.stations[1].id = inst.stations[0].id;
  CHECK(has(validate(inst), ViolationCode::DuplicateId));

  inst = base;
  inst.periods[0].duration_s = 100.0;
  CHECK(has(validate(inst), ViolationCode::HorizonMismatch));

  inst = base;
  inst.stations[0].outlets = 20;
  inst.stations[0].max_outlets = 16;
  CHECK(has(validate(inst), ViolationCode::OutletsExceedMax));

  inst = base;
  inst.periods.clear();
  CHECK(has(validate(inst), ViolationCode::EmptyPeriods));

  CHECK_THROWS_AS(require_valid(inst), InvalidInstance);
}

TEST_CASE("plans are costed exactly and checked against the budget") {
  auto inst = fixtures::worked_instance(1, true);
  REQUIRE(inst.candidates.size() == 2);
  inst.costs.budget = 20;
  PlacementPlan plan;
  plan.added_outlets[inst.stations[0].id] = 2;
  plan.opened[inst.candidates[0].id] = {Level::L2, 3};
  // 2 outlets at K=1, plus open 10 and 3 outlets at 1.
  CHECK(plan_cost(inst, plan) == Rational(15));
  CHECK(validate_plan(inst, plan).empty());

  plan.opened[inst.candidates[1].id] = {Level::L3, 1};
  CHECK(has(validate_plan(inst, plan), ViolationCode::BudgetExceeded));

  PlacementPlan bad;
  bad.added_outlets["nope"] = 1;
  CHECK(has(validate_plan(inst, bad), ViolationCode::UnknownStation));
  bad = {};
  bad.opened[inst.candidates[0].id] = {Level::L3, 8};
  CHECK(has(validate_plan(inst, bad), ViolationCode::PlanOutletCountInvalid));
  bad = {};
  bad.added_outlets["1"] = 99;
  CHECK(has(validate_plan(inst, bad), ViolationCode::PlanOutletsExceedMax));

  PlacementPlan zeros;
  zeros.added_outlets[inst.stations[1].id] = 0;
  CHECK(normalized(inst, zeros).empty());
}

TEST_CASE("instances survive a JSON round trip") {
  auto inst = fixtures::worked_instance(4, true);
  inst.costs.budget = Rational(7, 3);
  nlohmann::json j;
  to_json(j, inst);
  Instance back;
  from_json(j, back);
  CHECK(back == inst);

  PlacementPlan plan;
  plan.added_outlets["1"] = 2;
  plan.opened[inst.candidates[0].id] = {Level::L3, 1};
  plan.total_cost = plan_cost(inst, plan);
  nlohmann::json pj;
  to_json(pj, plan);
  PlacementPlan plan_back;
  from_json(pj, plan_back);
  CHECK(plan_back == plan);
}

TEST_CASE("assignment percentages follow the zero-demand convention") {
  AssignmentResult r;
  CHECK(r.satisfied_pct() == 100.0);
  r.total_demand_kw = 600;
  r.satisfied_kw = 425;
  r.impossible_kw = 175;
  CHECK(r.satisfied_pct() == doctest::Approx(425.0 / 6.0));
  CHECK(r.impossible_pct() == doctest::Approx(175.0 / 6.0));
}

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


#include <random>

#include "doctest.h"
#include "evcharge/maxflow.hpp"
#include "evcharge/placement.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace evcharge;
using placement::OptimizeParams;

namespace {

oracle::RandomShape tiny_shape() {
  oracle::RandomShape s;
  s.max_points = 5;
  s.max_stations = 2;
  s.max_candidates = 3;
  s.max_periods = 2;
  s.max_station_headroom = 2;
  return s;
}

Instance tiny_instance(std::mt19937_64& rng, long max_plans = 200) {
  for (;;) {
    auto inst = oracle::random_instance(rng, tiny_shape());
    if (oracle::count_plans(inst) <= max_plans) return inst;
  }
}

}  // namespace

TEST_CASE("branching picks by kind, then by fractionality") {
  using lp::IntVarKind;
  const std::vector<lp::IntVar> one{{IntVarKind::X, 0}};
  lp::IntegerBounds b{{0.0}, {5.0}};
  auto r = placement::branch(one, b, {2.5});
  REQUIRE(r);
  CHECK(r->down.upper[0] == 2.0);
  CHECK(r->up.lower[0] == 3.0);
  CHECK_FALSE(placement::branch(one, b, {2.0}));

  const std::vector<lp::IntVar> mixed{{IntVarKind::X, 0}, {IntVarKind::Y2, 0}, {IntVarKind::Z2, 0}};
  lp::IntegerBounds mb{{0.0, 0.0, 0.0}, {5.0, 2.0, 1.0}};
  r = placement::branch(mixed, mb, {0.5, 0.8, 0.4});
  REQUIRE(r);
  CHECK(r->var == 2);
  // z down to 0 closes the site's outlets too.
  CHECK(r->down.upper[1] == 0.0);
  CHECK(r->up.lower[2] == 1.0);

  r = placement::branch(mixed, mb, {0.5, 0.8, 1.0});
  REQUIRE(r);
  CHECK(r->var == 1);
}

TEST_CASE("rounding down stays within budget") {
  std::mt19937_64 rng(59);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int rep = 0; rep < 50; ++rep) {
    const auto inst = oracle::random_instance(rng, tiny_shape());
    const auto vars = lp::integer_layout(inst);
    std::vector<double> values;
    for (std::size_t i = 0; i < vars.size(); ++i) values.push_back(u(rng));
    const auto plan = placement::round_down(inst, vars, values);
    CHECK(plan.total_cost <= inst.costs.budget);
    CHECK(validate_plan(inst, plan).empty());
  }
}

TEST_CASE("zero budget returns the zero plan") {
  auto inst = fixtures::worked_instance(1, true);
  inst.costs.budget = 0;
  const auto r = placement::optimize(inst);
  CHECK(r.plan.empty());
  CHECK(r.report.objective_kw == maxflow::evaluate(inst).satisfied_kw);
  CHECK(r.report.termination == placement::Termination::Optimal);
}

TEST_CASE("a large budget on the worked example serves all demand") {
  auto inst = fixtures::worked_instance(1, true);
  inst.costs.budget = 700;
  const auto r = placement::optimize(inst);
  CHECK(r.report.objective_kw == 600.0);
  CHECK(r.report.satisfied_pct == doctest::Approx(100.0));
  CHECK(r.report.gap == 0.0);
  CHECK(r.plan.total_cost <= inst.costs.budget);
  CHECK(r.assignment.impossible_kw == 0.0);
}

TEST_CASE("optimize matches exhaustive enumeration") {
  std::mt19937_64 rng(61);
  OptimizeParams params;
  params.gap_tol = 0.0;
  for (int rep = 0; rep < 25; ++rep) {
    const auto inst = tiny_instance(rng);
    const double best = oracle::brute_force_optimum(inst);
    const auto r = placement::optimize(inst, params);
    CHECK(r.report.termination == placement::Termination::Optimal);
    CHECK(r.report.objective_kw == doctest::Approx(best).epsilon(1e-9));
    CHECK(r.plan.total_cost <= inst.costs.budget);
    CHECK(r.plan.total_cost == plan_cost(inst, r.plan));
    CHECK(r.report.objective_kw == maxflow::evaluate(inst, r.plan).satisfied_kw);
  }
}

TEST_CASE("bounds sandwich the optimum under node limits") {
  std::mt19937_64 rng(67);
  OptimizeParams params;
  params.node_limit = 2;
  for (int rep = 0; rep < 25; ++rep) {
    const auto inst = tiny_instance(rng);
    const double best = oracle::brute_force_optimum(inst);
    const auto r = placement::optimize(inst, params);
    CHECK(r.report.objective_kw <= best + 1e-9);
    CHECK(r.report.bound_kw >= best - 1e-6 * std::max(1.0, best) - 0.01);
    CHECK(r.report.gap >= 0.0);
  }
}

TEST_CASE("single-threaded optimize is deterministic") {
  std::mt19937_64 rng(71);
  for (int rep = 0; rep < 5; ++rep) {
    const auto inst = tiny_instance(rng, 2000);
    const auto a = placement::optimize(inst);
    const auto b = placement::optimize(inst);
    CHECK(a.plan == b.plan);
    CHECK(placement::to_json(a.report, false) == placement::to_json(b.report, false));
  }
}

TEST_CASE("sweep rows") {
  auto inst = fixtures::worked_instance(1, true);
  const auto zero = placement::sweep(inst, {Cost(0)});
  REQUIRE(zero.size() == 1);
  const auto base = maxflow::evaluate(inst);
  CHECK(zero[0].result.assignment.satisfied_kw == base.satisfied_kw);
  CHECK(zero[0].result.assignment.impossible_kw == base.impossible_kw);
  CHECK(zero[0].result.assignment.od_served_kw == base.od_served_kw);

  CHECK_THROWS_AS(placement::sweep(inst, {Cost(5), Cost(1)}), InputError);

  std::mt19937_64 rng(73);
  for (int rep = 0; rep < 10; ++rep) {
    const auto tiny = tiny_instance(rng, 5000);
    const auto rows = placement::sweep(tiny, {Cost(0), Cost(5), Cost(10), Cost(20), Cost(40)});
    for (std::size_t i = 1; i < rows.size(); ++i) {
      CHECK(rows[i].result.report.objective_kw >= rows[i - 1].result.report.objective_kw);
      CHECK(rows[i].result.plan.total_cost <= rows[i].budget);
    }
  }
}

TEST_CASE("period re-split preserves daily demand") {
  const auto one = fixtures::worked_instance(1, true);
  const auto four = placement::resplit_periods(one, six_hour_preset());
  REQUIRE(four.num_periods() == 4);
  CHECK(four.total_demand_kw() == doctest::Approx(one.total_demand_kw()));
  for (const auto& od : four.ods) CHECK(od.demand_kw[0] == doctest::Approx(od.total_demand_kw() / 4));
}

TEST_CASE("a coarse plan scores no better than the fine optimum") {
  std::mt19937_64 rng(79);
  for (int rep = 0; rep < 10; ++rep) {
    auto coarse = tiny_instance(rng, 5000);
    coarse.periods = single_period_preset();
    for (auto& od : coarse.ods) od.demand_kw.resize(1);
    std::vector<double> w{0.1, 0.2, 0.3, 0.4};
    const auto fine = placement::resplit_periods(coarse, six_hour_preset(), w);
    const auto r = placement::cross_evaluate(coarse, fine);
    CHECK(r.crossed.satisfied_kw <= r.multi.report.objective_kw + 1e-9);
    CHECK(r.multi.report.objective_kw <= r.single.report.objective_kw * (1.0 + 1e-4) + 1e-6);
  }
  auto other = fixtures::worked_instance(1, true);
  other.candidates.pop_back();
  CHECK_THROWS(placement::cross_evaluate(fixtures::worked_instance(1, true), other));
}

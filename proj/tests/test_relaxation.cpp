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
#include "evcharge/relaxation.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace evcharge;

namespace {

oracle::RandomShape tiny_shape() {
  oracle::RandomShape s;
  s.max_points = 5;
  s.max_stations = 2;
  s.max_candidates = 3;
  s.max_periods = 2;
  return s;
}

}  // namespace

TEST_CASE("integer layout order") {
  const auto inst = fixtures::worked_instance(1, true);
  const auto vars = lp::integer_layout(inst);
  REQUIRE(vars.size() == 2 + 4 * 2);
  CHECK(vars[0].kind == lp::IntVarKind::X);
  CHECK(vars[1].kind == lp::IntVarKind::X);
  // One y2, y3, z2, z3 block per candidate.
  const std::vector<lp::IntVarKind> block{lp::IntVarKind::Y2, lp::IntVarKind::Y3, lp::IntVarKind::Z2,
                                          lp::IntVarKind::Z3};
  for (int c = 0; c < 2; ++c) {
    for (int k = 0; k < 4; ++k) {
      CHECK(vars[2 + 4 * c + k].kind == block[k]);
      CHECK(vars[2 + 4 * c + k].index == c);
    }
  }
  const auto b = lp::default_bounds(inst);
  CHECK(b.upper[0] == inst.stations[0].expandable_outlets());
  CHECK(b.upper[2] == inst.costs.max_outlets_l2);
  CHECK(b.upper[5] == 1.0);
}

TEST_CASE("tightened bounds never cut a useful outlet") {
  std::mt19937_64 rng(41);
  for (int rep = 0; rep < 20; ++rep) {
    const auto inst = oracle::random_instance(rng, tiny_shape());
    const auto net = geo::build_flow_network(inst, true);
    const auto loose = lp::default_bounds(inst);
    const auto tight = lp::tightened_bounds(inst, net);
    for (std::size_t i = 0; i < loose.upper.size(); ++i) CHECK(tight.upper[i] <= loose.upper[i]);
  }
}

TEST_CASE("zero budget relaxation equals the assignment program") {
  std::mt19937_64 rng(43);
  for (int rep = 0; rep < 20; ++rep) {
    auto inst = oracle::random_instance(rng, tiny_shape());
    oracle::snap_to_milli(inst);
    inst.costs.budget = 0;
    const auto relax = lp::build_relaxation(inst, lp::default_bounds(inst));
    const auto sol = lp::solve_lp(relax.lp);
    REQUIRE(sol.status == lp::LpStatus::Optimal);
    CHECK(relax.objective_kw(sol) == doctest::Approx(maxflow::evaluate(inst).satisfied_kw).epsilon(1e-6).scale(1.0));
  }
}

TEST_CASE("fixing every integer at a plan reproduces its evaluation") {
  std::mt19937_64 rng(47);
  int checked = 0;
  for (int rep = 0; rep < 40; ++rep) {
    const auto inst = oracle::random_instance(rng, tiny_shape());
    std::vector<PlacementPlan> plans;
    oracle::for_each_plan(inst, [&](const PlacementPlan& p) {
      if (plans.size() < 6 || rng() % 8 == 0) plans.push_back(p);
    });
    auto relax = lp::build_relaxation(inst, lp::default_bounds(inst));
    for (const auto& plan : plans) {
      relax.apply(lp::bounds_for_plan(inst, plan));
      const auto sol = lp::solve_lp(relax.lp);
      REQUIRE(sol.status == lp::LpStatus::Optimal);
      const double flow = maxflow::evaluate(inst, plan).satisfied_kw;
      // Max flow rounds each capacity to 1e-3 kW.
      const double slack = 1e-3 * (inst.ods.size() + inst.stations.size() + inst.candidates.size()) *
                           inst.num_periods();
      CHECK(std::abs(relax.objective_kw(sol) - flow) <= slack + 1e-6 * flow);
      ++checked;
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("closed candidates carry no flow") {
  std::mt19937_64 rng(53);
  for (int rep = 0; rep < 20; ++rep) {
    auto inst = oracle::random_instance(rng, tiny_shape());
    inst.costs.budget = 1000;
    auto relax = lp::build_relaxation(inst, lp::default_bounds(inst));
    auto bounds = lp::default_bounds(inst);
    for (std::size_t c = 0; c < inst.candidates.size(); ++c) {
      for (auto kind : {lp::IntVarKind::Z2, lp::IntVarKind::Z3}) {
        const int i = relax.find(kind, static_cast<int>(c));
        bounds.lower[i] = bounds.upper[i] = 0.0;
      }
    }
    relax.apply(bounds);
    const auto sol = lp::solve_lp(relax.lp);
    REQUIRE(sol.status == lp::LpStatus::Optimal);
    const int ns = static_cast<int>(inst.stations.size());
    for (int col = 0; col < relax.lp.num_cols(); ++col) {
      const auto& name = relax.lp.col_name(col);
      if (name.rfind("c_", 0) != 0) continue;
      const int site = std::stoi(name.substr(name.rfind('_') + 1));
      if (site >= ns) CHECK(sol.primal[col] == doctest::Approx(0.0));
    }
  }
}

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

// Branch-and-bound for choosing where to open stations and add outlets.
//
// Nodes are explored best-bound first. Every candidate incumbent, whether it
// comes from an integral relaxation or from the rounding heuristic, is scored
// by an exact max-flow evaluation; the LP value is only ever used as a bound.
// The search is single-threaded, so the node sequence is deterministic.

#ifndef EVCHARGE_PLACEMENT_HPP
#define EVCHARGE_PLACEMENT_HPP

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "evcharge/lp.hpp"
#include "evcharge/model.hpp"
#include "evcharge/relaxation.hpp"

namespace evcharge::placement {

enum class Termination { Optimal, TimeLimit, NodeLimit };

std::string to_string(Termination termination);

struct OptimizeParams {
  double gap_tol = 1e-4;
  double time_limit_s = 1800.0;
  long node_limit = -1;  // negative: unlimited
  int threads = 1;       // per-period max-flow workers
  /// Budget-feasible plan to seed the incumbent with; ignored if infeasible.
  std::optional<PlacementPlan> warm_start;
  lp::SimplexOptions simplex;
};

struct SolveReport {
  double objective_kw = 0.0;
  double total_demand_kw = 0.0;
  double satisfied_pct = 100.0;
  double bound_kw = 0.0;
  double gap = 0.0;
  long nodes = 0;
  long lp_iterations = 0;
  double wall_time_s = 0.0;
  Termination termination = Termination::Optimal;
  Cost budget = 0;
  Cost plan_cost = 0;
  bool opens_level3 = false;
};

struct OptimizeResult {
  PlacementPlan plan;
  AssignmentResult assignment;
  SolveReport report;
};

OptimizeResult optimize(const Instance& instance, const OptimizeParams& params = {});

/// (bound - incumbent) / max(incumbent, eps).
double relative_gap(double bound, double incumbent);

struct BranchResult {
  int var = -1;  // index into the integer layout
  double value = 0.0;
  lp::IntegerBounds down;  // var <= floor(value)
  lp::IntegerBounds up;    // var >= ceil(value)
};

/// Most-fractional branching; nullopt when every value is integral within
/// `int_tol`. Branching a z down to 0 also fixes the matching y to 0.
std::optional<BranchResult> branch(const std::vector<lp::IntVar>& vars, const lp::IntegerBounds& bounds,
                                   const std::vector<double>& values, double int_tol = 1e-6);

/// Plan read off integral (or rounded-down) relaxation values, repaired to
/// the budget by dropping the lowest-rate outlets first.
PlacementPlan round_down(const Instance& instance, const std::vector<lp::IntVar>& vars,
                         const std::vector<double>& values);

struct SweepRow {
  Cost budget = 0;
  OptimizeResult result;
};

/// One optimize per budget (ascending). Each cell is seeded with the previous
/// cell's plan, so the satisfied column never decreases.
std::vector<SweepRow> sweep(const Instance& instance, const std::vector<Cost>& budgets,
                            const OptimizeParams& params = {});

/// Same ODs, sites and costs over `periods`, with each OD's total demand
/// split by `weights` (normalized; uniform if empty).
Instance resplit_periods(const Instance& instance, const std::vector<Period>& periods,
                         std::vector<double> weights = {});

struct CrossEvalResult {
  OptimizeResult single;       // optimized on the coarse instance
  AssignmentResult crossed;    // that plan scored on the fine instance
  OptimizeResult multi;        // optimized on the fine instance
};

/// Optimizes on `coarse`, scores the plan on `fine`, then optimizes on
/// `fine` seeded with the coarse plan. Both instances must share ODs and
/// sites; throws InputError otherwise.
CrossEvalResult cross_evaluate(const Instance& coarse, const Instance& fine, const OptimizeParams& params = {});

nlohmann::json to_json(const SolveReport& report, bool include_wall_time = true);

}  // namespace evcharge::placement

#endif  // EVCHARGE_PLACEMENT_HPP

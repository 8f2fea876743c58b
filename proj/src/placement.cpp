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

#include "evcharge/placement.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "evcharge/geo.hpp"
#include "evcharge/maxflow.hpp"

namespace evcharge::placement {

using lp::IntVar;
using lp::IntVarKind;

std::string to_string(Termination termination) {
  switch (termination) {
    case Termination::Optimal: return "Optimal";
    case Termination::TimeLimit: return "TimeLimit";
    case Termination::NodeLimit: return "NodeLimit";
  }
  return "Unknown";
}

double relative_gap(double bound, double incumbent) {
  constexpr double kEps = 1e-9;
  return (bound - incumbent) / std::max(incumbent, kEps);
}

namespace {

int priority(IntVarKind kind) {
  switch (kind) {
    case IntVarKind::Z2:
    case IntVarKind::Z3: return 0;
    case IntVarKind::Y2:
    case IntVarKind::Y3: return 1;
    case IntVarKind::X: return 2;
  }
  return 3;
}

IntVarKind matching_y(IntVarKind z) { return z == IntVarKind::Z2 ? IntVarKind::Y2 : IntVarKind::Y3; }

int find_var(const std::vector<IntVar>& vars, IntVarKind kind, int index) {
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (vars[i].kind == kind && vars[i].index == index) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace

std::optional<BranchResult> branch(const std::vector<IntVar>& vars, const lp::IntegerBounds& bounds,
                                   const std::vector<double>& values, double int_tol) {
  int best = -1;
  double best_score = 0.0;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const double frac = values[i] - std::floor(values[i]);
    if (frac <= int_tol || frac >= 1.0 - int_tol) continue;
    const double score = std::abs(frac - 0.5);
    const int rank = best < 0 ? 0 : priority(vars[i].kind) - priority(vars[best].kind);
    if (best < 0 || rank < 0 || (rank == 0 && score < best_score - 1e-12)) {
      best = static_cast<int>(i);
      best_score = score;
    }
  }
  if (best < 0) return std::nullopt;

  BranchResult out;
  out.var = best;
  out.value = values[best];
  out.down = bounds;
  out.up = bounds;
  out.down.upper[best] = std::floor(values[best]);
  out.up.lower[best] = std::ceil(values[best]);
  const IntVar& v = vars[best];
  if ((v.kind == IntVarKind::Z2 || v.kind == IntVarKind::Z3) && out.down.upper[best] == 0.0) {
    const int y = find_var(vars, matching_y(v.kind), v.index);
    if (y >= 0) {
      out.down.lower[y] = 0.0;
      out.down.upper[y] = 0.0;
    }
  }
  return out;
}

namespace {

constexpr double kIntTol = 1e-6;

int floor_int(double v) { return std::max(0, static_cast<int>(std::floor(v + kIntTol))); }

double unit_rate(const Instance& instance, const std::string& id, bool is_station) {
  if (is_station) {
    for (const auto& st : instance.stations) {
      if (st.id == id) return st.per_outlet_kw_per_s;
    }
  }
  return 0.0;
}

// Removes single outlets, lowest kW/s first, until the plan is affordable.
void repair_budget(const Instance& instance, PlacementPlan& plan) {
  while (plan_cost(instance, plan) > instance.costs.budget) {
    double worst_rate = std::numeric_limits<double>::infinity();
    std::string worst_id;
    bool worst_is_station = true;
    for (const auto& [id, n] : plan.added_outlets) {
      const double rate = unit_rate(instance, id, true);
      if (n > 0 && rate <= worst_rate) {
        worst_rate = rate;
        worst_id = id;
        worst_is_station = true;
      }
    }
    for (const auto& [id, opened] : plan.opened) {
      const double rate = instance.costs.new_outlet_kw_per_s(opened.level);
      if (opened.outlets > 0 && rate <= worst_rate) {
        worst_rate = rate;
        worst_id = id;
        worst_is_station = false;
      }
    }
    if (worst_id.empty()) break;
    if (worst_is_station) {
      if (--plan.added_outlets[worst_id] == 0) plan.added_outlets.erase(worst_id);
    } else if (--plan.opened[worst_id].outlets == 0) {
      plan.opened.erase(worst_id);
    }
  }
}

}  // namespace

PlacementPlan round_down(const Instance& instance, const std::vector<IntVar>& vars,
                         const std::vector<double>& values) {
  PlacementPlan plan;
  const int num_candidates = static_cast<int>(instance.candidates.size());
  std::vector<double> y2(num_candidates), y3(num_candidates), z2(num_candidates), z3(num_candidates);
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const IntVar& v = vars[i];
    switch (v.kind) {
      case IntVarKind::X: {
        const auto& st = instance.stations[v.index];
        const int x = std::min(floor_int(values[i]), st.expandable_outlets());
        if (x > 0) plan.added_outlets[st.id] = x;
        break;
      }
      case IntVarKind::Y2: y2[v.index] = values[i]; break;
      case IntVarKind::Y3: y3[v.index] = values[i]; break;
      case IntVarKind::Z2: z2[v.index] = values[i]; break;
      case IntVarKind::Z3: z3[v.index] = values[i]; break;
    }
  }
  for (int s = 0; s < num_candidates; ++s) {
    const int n2 = std::min(floor_int(y2[s]), instance.costs.max_outlets_l2);
    const int n3 = std::min(floor_int(y3[s]), instance.costs.max_outlets_l3);
    if (n2 == 0 && n3 == 0) continue;
    // One level per site; keep the level the relaxation leans towards.
    const bool use_l3 = n3 > 0 && (n2 == 0 || z3[s] > z2[s]);
    plan.opened[instance.candidates[s].id] = use_l3 ? OpenedStation{Level::L3, n3} : OpenedStation{Level::L2, n2};
  }
  repair_budget(instance, plan);
  return normalized(instance, std::move(plan));
}

namespace {

// Rounds fractional relaxation values up, largest fraction first, whenever
// the extra outlet (or station) still fits in the budget.
PlacementPlan fill_up(const Instance& instance, const std::vector<IntVar>& vars, const std::vector<double>& values,
                      PlacementPlan plan) {
  std::vector<int> order;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const double frac = values[i] - std::floor(values[i]);
    if (frac > kIntTol && frac < 1.0 - kIntTol && vars[i].kind != IntVarKind::Z2 && vars[i].kind != IntVarKind::Z3) {
      order.push_back(static_cast<int>(i));
    }
  }
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return values[a] - std::floor(values[a]) > values[b] - std::floor(values[b]);
  });
  for (int i : order) {
    const IntVar& v = vars[i];
    PlacementPlan trial = plan;
    if (v.kind == IntVarKind::X) {
      const auto& st = instance.stations[v.index];
      int& x = trial.added_outlets[st.id];
      if (x >= st.expandable_outlets()) continue;
      ++x;
    } else {
      const Level level = v.kind == IntVarKind::Y2 ? Level::L2 : Level::L3;
      const auto& id = instance.candidates[v.index].id;
      auto it = trial.opened.find(id);
      if (it == trial.opened.end()) {
        trial.opened[id] = OpenedStation{level, std::min(static_cast<int>(std::ceil(values[i])),
                                                         instance.costs.max_new_outlets(level))};
      } else {
        if (it->second.level != level || it->second.outlets >= instance.costs.max_new_outlets(level)) continue;
        ++it->second.outlets;
      }
    }
    if (plan_cost(instance, trial) <= instance.costs.budget) plan = std::move(trial);
  }
  return normalized(instance, std::move(plan));
}

// Slack that absorbs the milli-kW rounding of max-flow evaluation and the
// simplex tolerances when comparing LP bounds with incumbent values.
double comparison_slack(const geo::FlowNetwork& network, double total_demand) {
  double slack = 1e-6 * std::max(1.0, total_demand);
  for (int t = 0; t < network.num_periods(); ++t) {
    for (int o = 0; o < network.num_ods(); ++o) {
      const double cap = network.cap(t, network.l_arc(o));
      slack += std::abs(cap - maxflow::to_kw(maxflow::to_milli(cap)));
    }
  }
  return slack;
}

struct Node {
  double bound = 0.0;
  long id = 0;
  lp::IntegerBounds bounds;
  lp::Basis basis;
  BranchResult choice;
};

struct WorseNode {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound < b.bound;
    return a.id > b.id;
  }
};

std::string plan_key(const PlacementPlan& plan) {
  nlohmann::json j;
  to_json(j, plan);
  return j.dump();
}

}  // namespace

OptimizeResult optimize(const Instance& instance, const OptimizeParams& params) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };

  require_valid(instance);
  if (!(params.gap_tol >= 0.0)) throw InputError("BadParameter", "gap_tol must be non-negative");

  const maxflow::EvaluateOptions eval_options{params.threads};
  const geo::FlowNetwork network = geo::build_flow_network(instance, true);
  const lp::IntegerBounds root_bounds = lp::tightened_bounds(instance, network);
  lp::Relaxation relax = lp::build_relaxation(instance, network, root_bounds);
  const double total_demand = instance.total_demand_kw();
  const double slack = comparison_slack(network, total_demand);

  OptimizeResult best;
  best.plan = normalized(instance, PlacementPlan{});
  best.assignment = maxflow::evaluate(instance, best.plan, eval_options);
  std::set<std::string> seen{plan_key(best.plan)};

  auto consider = [&](PlacementPlan plan) {
    plan = normalized(instance, std::move(plan));
    if (!validate_plan(instance, plan).empty()) return;
    if (!seen.insert(plan_key(plan)).second) return;
    auto assignment = maxflow::evaluate(instance, plan, eval_options);
    if (assignment.satisfied_kw > best.assignment.satisfied_kw) {
      best.plan = std::move(plan);
      best.assignment = std::move(assignment);
    }
  };
  if (params.warm_start) consider(*params.warm_start);
  auto incumbent = [&] { return best.assignment.satisfied_kw; };
  auto closed = [&](double bound) {
    return bound <= incumbent() + slack || relative_gap(bound, incumbent()) <= params.gap_tol;
  };

  std::vector<Node> open;  // heap ordered by WorseNode
  long nodes = 0, iterations = 0, next_id = 0;
  // Bounds of subtrees dropped without a proof (LP failures) or pruned by
  // the relative gap; they still count towards the reported bound.
  double dropped_bound = -std::numeric_limits<double>::infinity();

  auto solve_node = [&](const lp::IntegerBounds& bounds, const lp::Basis* warm, double parent_bound) {
    relax.apply(bounds);
    lp::LpSolution sol = lp::solve_lp(relax.lp, params.simplex, warm);
    if (sol.status == lp::LpStatus::IterationLimit && warm != nullptr) {
      iterations += sol.iterations;
      sol = lp::solve_lp(relax.lp, params.simplex, nullptr);
    }
    ++nodes;
    iterations += sol.iterations;
    if (sol.status == lp::LpStatus::Infeasible) return;
    if (sol.status != lp::LpStatus::Optimal) {
      dropped_bound = std::max(dropped_bound, parent_bound);
      return;
    }
    const double bound = std::min(relax.objective_kw(sol), parent_bound);
    if (bound <= incumbent() + slack) return;
    const auto values = relax.integer_values(sol);
    auto choice = branch(relax.int_vars, bounds, values, kIntTol);
    if (!choice) {
      consider(round_down(instance, relax.int_vars, values));
      return;
    }
    consider(fill_up(instance, relax.int_vars, values, round_down(instance, relax.int_vars, values)));
    if (bound <= incumbent() + slack) return;
    if (closed(bound)) {
      dropped_bound = std::max(dropped_bound, bound);
      return;
    }
    open.push_back(Node{bound, next_id++, bounds, std::move(sol.basis), std::move(*choice)});
    std::push_heap(open.begin(), open.end(), WorseNode{});
  };

  Termination termination = Termination::Optimal;
  solve_node(root_bounds, nullptr, std::numeric_limits<double>::infinity());
  while (!open.empty()) {
    if (closed(open.front().bound)) break;
    if (elapsed() >= params.time_limit_s) {
      termination = Termination::TimeLimit;
      break;
    }
    if (params.node_limit >= 0 && nodes >= params.node_limit) {
      termination = Termination::NodeLimit;
      break;
    }
    std::pop_heap(open.begin(), open.end(), WorseNode{});
    Node node = std::move(open.back());
    open.pop_back();
    solve_node(node.choice.down, &node.basis, node.bound);
    solve_node(node.choice.up, &node.basis, node.bound);
  }

  double bound = std::max(incumbent(), dropped_bound);
  if (!open.empty()) bound = std::max(bound, open.front().bound);
  if (bound <= incumbent() + slack) bound = incumbent();

  SolveReport& r = best.report;
  r.objective_kw = incumbent();
  r.total_demand_kw = best.assignment.total_demand_kw;
  r.satisfied_pct = best.assignment.satisfied_pct();
  r.bound_kw = bound;
  r.gap = std::max(0.0, relative_gap(bound, incumbent()));
  if (bound == incumbent()) r.gap = 0.0;
  r.nodes = nodes;
  r.lp_iterations = iterations;
  r.termination = termination;
  if (termination == Termination::Optimal && r.gap > params.gap_tol) r.termination = Termination::NodeLimit;
  r.budget = instance.costs.budget;
  r.plan_cost = best.plan.total_cost;
  r.opens_level3 = std::any_of(best.plan.opened.begin(), best.plan.opened.end(),
                               [](const auto& kv) { return kv.second.level == Level::L3; });
  r.wall_time_s = elapsed();
  return best;
}

std::vector<SweepRow> sweep(const Instance& instance, const std::vector<Cost>& budgets, const OptimizeParams& params) {
  if (!std::is_sorted(budgets.begin(), budgets.end())) {
    throw InputError("UnsortedBudgets", "sweep budgets must be ascending");
  }
  std::vector<SweepRow> rows;
  Instance cell = instance;
  OptimizeParams cell_params = params;
  for (const Cost& budget : budgets) {
    if (budget < 0) throw InputError("NegativeBudget", "budget must be non-negative");
    cell.costs.budget = budget;
    SweepRow row{budget, optimize(cell, cell_params)};
    cell_params.warm_start = row.result.plan;
    rows.push_back(std::move(row));
  }
  return rows;
}

Instance resplit_periods(const Instance& instance, const std::vector<Period>& periods, std::vector<double> weights) {
  if (periods.empty()) throw InputError("EmptyPeriods", "at least one period is required");
  if (weights.empty()) weights.assign(periods.size(), 1.0);
  if (weights.size() != periods.size()) throw InputError("WeightCount", "one weight per period is required");
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(sum > 0.0)) throw InputError("WeightSum", "period weights must have a positive sum");
  Instance out = instance;
  out.periods = periods;
  out.horizon_s = 0.0;
  for (const auto& p : periods) out.horizon_s += p.duration_s;
  for (auto& od : out.ods) {
    const double total = od.total_demand_kw();
    od.demand_kw.clear();
    for (double w : weights) od.demand_kw.push_back(total * w / sum);
  }
  return out;
}

namespace {

template <typename T>
bool same_ids(const std::vector<T>& a, const std::vector<T>& b) {
  return std::equal(a.begin(), a.end(), b.begin(), b.end(), [](const T& x, const T& y) { return x.id == y.id; });
}

}  // namespace

CrossEvalResult cross_evaluate(const Instance& coarse, const Instance& fine, const OptimizeParams& params) {
  if (!same_ids(coarse.ods, fine.ods) || !same_ids(coarse.stations, fine.stations) ||
      !same_ids(coarse.candidates, fine.candidates)) {
    throw InputError("InstanceMismatch", "cross-evaluation needs identical ODs, stations and candidates");
  }
  if (coarse.costs != fine.costs) throw InputError("InstanceMismatch", "cross-evaluation needs identical costs");
  CrossEvalResult out;
  out.single = optimize(coarse, params);
  out.crossed = maxflow::evaluate(fine, out.single.plan, maxflow::EvaluateOptions{params.threads});
  OptimizeParams seeded = params;
  seeded.warm_start = out.single.plan;
  out.multi = optimize(fine, seeded);
  return out;
}

nlohmann::json to_json(const SolveReport& report, bool include_wall_time) {
  nlohmann::json j = {
      {"objective_kw", report.objective_kw},
      {"total_demand_kw", report.total_demand_kw},
      {"satisfied_pct", report.satisfied_pct},
      {"bound_kw", report.bound_kw},
      {"gap", report.gap},
      {"nodes", report.nodes},
      {"lp_iterations", report.lp_iterations},
      {"termination", to_string(report.termination)},
      {"budget", cost_to_json(report.budget)},
      {"plan_cost", cost_to_json(report.plan_cost)},
      {"opens_level3", report.opens_level3},
  };
  if (include_wall_time) j["wall_time_s"] = report.wall_time_s;
  return j;
}

}  // namespace evcharge::placement

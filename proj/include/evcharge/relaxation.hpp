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

// Linear relaxation of the station placement and sizing program.
//
// Columns, in order:
//   a[t][o]   flow out of the source into OD o          0 <= a <= A_o^t
//   b[t][k]   flow on the k-th OD->site arc             0 <= b
//   c[t][s]   flow from site s to the sink              0 <= c
//   x[e]      outlets added to existing station e       box from branching
//   y2,y3,z2,z3 per candidate                           box from branching
// Rows:
//   a[t][o] - sum_k b[t][k]               = 0   (per OD and period)
//   sum_k b[t][k] - c[t][s]               = 0   (per site and period)
//   c[t][e] - P'_e x[e]                  <= C_e^t
//   c[t][s] - Q2'_t y2[s] - Q3'_t y3[s]  <= 0
//   y2 - Y2 z2 <= 0,  y3 - Y3 z3 <= 0,  z2 + z3 <= 1
//   sum K x + sum (I2 y2 + J2 z2 + I3 y3 + J3 z3) <= G
// The outlet coefficients are capped by the demand D that can reach the site
// (P' = min(P_e d_t, max(0, D - C_e)), Q' = min(Q_t, D)). For integral
// outlet counts this admits exactly the same flows, but it keeps a fraction
// of one outlet from carrying a whole site's demand in the relaxation.
// Flow quantities are divided by `flow_scale` so that the LP works with
// values of order one; `objective_kw` undoes the scaling.

#ifndef EVCHARGE_RELAXATION_HPP
#define EVCHARGE_RELAXATION_HPP

#include <string>
#include <vector>

#include "evcharge/geo.hpp"
#include "evcharge/lp.hpp"
#include "evcharge/model.hpp"

namespace evcharge::lp {

enum class IntVarKind { Z2, Z3, Y2, Y3, X };

std::string to_string(IntVarKind kind);

struct IntVar {
  IntVarKind kind;
  int index;  // station index for X, candidate index otherwise
};

/// Integer variables in canonical order: x for every station, then
/// a block of y2, y3, z2, z3 for each candidate in turn.
std::vector<IntVar> integer_layout(const Instance& instance);

struct IntegerBounds {
  std::vector<double> lower;
  std::vector<double> upper;
};

/// Domain of every integer variable before branching.
IntegerBounds default_bounds(const Instance& instance);

/// Per period and site, the demand of every OD with an arc to that site.
std::vector<std::vector<double>> reachable_demand(const geo::FlowNetwork& network);

/// Default bounds with outlet counts capped at the number that could carry
/// the site's reachable demand; larger counts never add flow.
IntegerBounds tightened_bounds(const Instance& instance, const geo::FlowNetwork& network);

/// Bounds that pin every integer variable to the plan's value.
IntegerBounds bounds_for_plan(const Instance& instance, const PlacementPlan& plan);

struct Relaxation {
  LinearProgram lp;
  std::vector<IntVar> int_vars;
  std::vector<int> int_col;  // LP column of each integer variable
  double flow_scale = 1.0;

  double objective_kw(const LpSolution& solution) const { return solution.objective * flow_scale; }
  std::vector<double> integer_values(const LpSolution& solution) const;
  /// Replaces the box of every integer variable.
  void apply(const IntegerBounds& bounds);
  /// Index in `int_vars` of the integer variable of `kind` for `index`.
  int find(IntVarKind kind, int index) const;
};

/// `network` must be built with candidates.
Relaxation build_relaxation(const Instance& instance, const geo::FlowNetwork& network,
                            const IntegerBounds& bounds);
Relaxation build_relaxation(const Instance& instance, const IntegerBounds& bounds);

/// The assignment LP alone (no expansion variables).
Relaxation build_assignment_lp(const Instance& instance);

}  // namespace evcharge::lp

#endif  // EVCHARGE_RELAXATION_HPP

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

// Bounded-variable linear programs and a revised primal simplex solver.
//
//   optimize   c^T x
//   subject to A x (<=, =, >=) b,   l <= x <= u   (u may be +inf)
//
// Every row receives a logical (slack) column, so the working basis is an
// m x m selection of [A | I]. The basis is kept as a sparse LU factorization
// of a reference basis plus a product-form eta file, refactorized
// periodically. Phase 1 minimizes the sum of bound infeasibilities of the
// basic variables, which lets the same code start cold (slack basis) or warm
// (a basis from a related LP whose bounds changed).

#ifndef EVCHARGE_LP_HPP
#define EVCHARGE_LP_HPP

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Sparse>

namespace evcharge::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { LessEqual, Equal, GreaterEqual };
enum class Direction { Maximize, Minimize };

class LinearProgram {
 public:
  explicit LinearProgram(Direction direction = Direction::Maximize) : direction_(direction) {}

  int add_column(double objective, double lower, double upper, std::string name = {});
  int add_row(Sense sense, double rhs, std::string name = {});
  /// Duplicate (row, col) entries are summed.
  void add_entry(int row, int col, double value);

  int num_rows() const { return static_cast<int>(rhs_.size()); }
  int num_cols() const { return static_cast<int>(objective_.size()); }
  Direction direction() const { return direction_; }

  double objective(int col) const { return objective_[col]; }
  double lower(int col) const { return lower_[col]; }
  double upper(int col) const { return upper_[col]; }
  void set_bounds(int col, double lower, double upper) {
    lower_[col] = lower;
    upper_[col] = upper;
  }
  Sense sense(int row) const { return senses_[row]; }
  double rhs(int row) const { return rhs_[row]; }
  const std::string& col_name(int col) const { return col_names_[col]; }
  const std::string& row_name(int row) const { return row_names_[row]; }
  const std::vector<Eigen::Triplet<double>>& entries() const { return entries_; }

  /// Column-major constraint matrix (num_rows x num_cols).
  Eigen::SparseMatrix<double> matrix() const;

  /// Empty string iff dimensions, bounds and entries are consistent.
  std::string check() const;

 private:
  Direction direction_;
  std::vector<double> objective_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<std::string> col_names_;
  std::vector<Sense> senses_;
  std::vector<double> rhs_;
  std::vector<std::string> row_names_;
  std::vector<Eigen::Triplet<double>> entries_;
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

std::string to_string(LpStatus status);

enum class VarStatus : std::uint8_t { Basic, AtLower, AtUpper, Free };

/// Simplex basis over structural columns followed by one logical per row.
struct Basis {
  std::vector<int> basic;           // size num_rows
  std::vector<VarStatus> status;    // size num_cols + num_rows

  bool empty() const { return basic.empty(); }
};

struct LpSolution {
  LpStatus status = LpStatus::IterationLimit;
  double objective = 0.0;
  std::vector<double> primal;         // structural values
  std::vector<double> duals;          // one per row, in the LP's own sense
  std::vector<double> reduced_costs;  // c_j - a_j^T y
  Basis basis;
  long iterations = 0;

  /// b^T y plus the bound terms of the reduced costs; equals `objective` at
  /// optimality and bounds it from the other side for any dual-feasible y.
  double dual_objective = 0.0;
};

struct SimplexOptions {
  long max_iterations = 1'000'000;
  double feasibility_tol = 1e-7;
  double optimality_tol = 1e-7;
  double pivot_tol = 1e-9;
  /// Consecutive degenerate pivots before switching to Bland's rule.
  int degeneracy_streak = 50;
  /// Eta-file length that triggers a fresh LU factorization.
  int refactor_interval = 64;
};

/// Solves `lp`; `warm_start` (if non-empty and dimension-compatible) seeds the
/// basis. Throws std::invalid_argument on a malformed program.
LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& options = {},
                    const Basis* warm_start = nullptr);

/// CPLEX-style LP text format, for cross-checking with external solvers.
std::string to_lp_format(const LinearProgram& lp);

}  // namespace evcharge::lp

#endif  // EVCHARGE_LP_HPP

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

#include "evcharge/lp.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>
#include <stdexcept>

#include <Eigen/SparseLU>

namespace evcharge::lp {

// ---------------------------------------------------------------------------
// LinearProgram

int LinearProgram::add_column(double objective, double lower, double upper, std::string name) {
  objective_.push_back(objective);
  lower_.push_back(lower);
  upper_.push_back(upper);
  if (name.empty()) name = "x" + std::to_string(objective_.size() - 1);
  col_names_.push_back(std::move(name));
  return num_cols() - 1;
}

int LinearProgram::add_row(Sense sense, double rhs, std::string name) {
  senses_.push_back(sense);
  rhs_.push_back(rhs);
  if (name.empty()) name = "r" + std::to_string(rhs_.size() - 1);
  row_names_.push_back(std::move(name));
  return num_rows() - 1;
}

void LinearProgram::add_entry(int row, int col, double value) { entries_.emplace_back(row, col, value); }

Eigen::SparseMatrix<double> LinearProgram::matrix() const {
  Eigen::SparseMatrix<double> a(num_rows(), num_cols());
  a.setFromTriplets(entries_.begin(), entries_.end());
  a.makeCompressed();
  return a;
}

std::string LinearProgram::check() const {
  for (int j = 0; j < num_cols(); ++j) {
    if (!std::isfinite(objective_[j])) return "non-finite objective coefficient in column " + col_names_[j];
    if (std::isnan(lower_[j]) || std::isnan(upper_[j]) || lower_[j] == kInf || upper_[j] == -kInf) {
      return "invalid bounds on column " + col_names_[j];
    }
    if (lower_[j] > upper_[j]) return "lower bound above upper bound on column " + col_names_[j];
  }
  for (int i = 0; i < num_rows(); ++i) {
    if (!std::isfinite(rhs_[i])) return "non-finite right-hand side in row " + row_names_[i];
  }
  for (const auto& e : entries_) {
    if (e.row() < 0 || e.row() >= num_rows() || e.col() < 0 || e.col() >= num_cols()) {
      return "matrix entry out of range";
    }
    if (!std::isfinite(e.value())) return "non-finite matrix entry";
  }
  return {};
}

std::string to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "Optimal";
    case LpStatus::Infeasible: return "Infeasible";
    case LpStatus::Unbounded: return "Unbounded";
    case LpStatus::IterationLimit: return "IterationLimit";
  }
  return "Unknown";
}

// ---------------------------------------------------------------------------
// Revised simplex

namespace {

using Vec = Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<double>;

struct Eta {
  int row;
  double pivot;
  std::vector<std::pair<int, double>> off;  // nonzeros of the column except the pivot
};

class Simplex {
 public:
  Simplex(const LinearProgram& lp, const SimplexOptions& options) : lp_(lp), opt_(options) {
    n_ = lp.num_cols();
    m_ = lp.num_rows();
    total_ = n_ + m_;
    sign_ = (lp.direction() == Direction::Maximize) ? -1.0 : 1.0;

    row_sign_.assign(m_, 1.0);
    b_.resize(m_);
    for (int i = 0; i < m_; ++i) {
      if (lp.sense(i) == Sense::GreaterEqual) row_sign_[i] = -1.0;
      b_(i) = row_sign_[i] * lp.rhs(i);
    }
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(lp.entries().size());
    for (const auto& e : lp.entries()) trip.emplace_back(e.row(), e.col(), row_sign_[e.row()] * e.value());
    a_.resize(m_, n_);
    a_.setFromTriplets(trip.begin(), trip.end());
    a_.makeCompressed();

    lo_.resize(total_);
    up_.resize(total_);
    cost_.assign(total_, 0.0);
    for (int j = 0; j < n_; ++j) {
      lo_[j] = lp.lower(j);
      up_[j] = lp.upper(j);
      cost_[j] = sign_ * lp.objective(j);
    }
    for (int i = 0; i < m_; ++i) {
      lo_[n_ + i] = 0.0;
      up_[n_ + i] = lp.sense(i) == Sense::Equal ? 0.0 : kInf;
    }
    x_.assign(total_, 0.0);
    status_.assign(total_, VarStatus::AtLower);
    pos_.assign(total_, -1);
    head_.assign(m_, -1);
  }

  LpSolution run(const Basis* warm) {
    LpSolution out;
    if (m_ == 0) return solve_unconstrained();

    bool ok = false;
    if (warm != nullptr && !warm->empty()) ok = load_basis(*warm);
    if (!ok) load_slack_basis();

    long iterations = 0;
    int recoveries = 0;
    LpStatus status = LpStatus::IterationLimit;
    while (iterations < opt_.max_iterations) {
      const Step step = iterate();
      if (step == Step::Continue) {
        ++iterations;
        continue;
      }
      if (step == Step::Singular) {
        if (++recoveries > 5) break;
        load_slack_basis(/*keep_nonbasic=*/true);
        continue;
      }
      if (step == Step::Optimal) {
        // Confirm on a fresh factorization before accepting.
        if (!refactor()) {
          if (++recoveries > 5) break;
          load_slack_basis(true);
          continue;
        }
        if (max_infeasibility() > opt_.feasibility_tol) continue;
        status = LpStatus::Optimal;
        break;
      }
      status = step == Step::Infeasible ? LpStatus::Infeasible : LpStatus::Unbounded;
      break;
    }

    out.status = status;
    out.iterations = iterations;
    out.primal.assign(x_.begin(), x_.begin() + n_);
    out.objective = 0.0;
    for (int j = 0; j < n_; ++j) out.objective += lp_.objective(j) * x_[j];
    out.basis.basic = head_;
    out.basis.status = status_;
    if (status == LpStatus::Optimal) fill_duals(out);
    return out;
  }

 private:
  enum class Step { Continue, Optimal, Infeasible, Unbounded, Singular };

  LpSolution solve_unconstrained() {
    LpSolution out;
    out.status = LpStatus::Optimal;
    out.primal.resize(n_);
    for (int j = 0; j < n_; ++j) {
      const double c = cost_[j];
      double v;
      if (c < 0.0) {
        v = up_[j];
      } else if (c > 0.0) {
        v = lo_[j];
      } else {
        v = std::isfinite(lo_[j]) ? lo_[j] : (std::isfinite(up_[j]) ? up_[j] : 0.0);
      }
      if (!std::isfinite(v)) {
        out.status = LpStatus::Unbounded;
        v = 0.0;
      }
      out.primal[j] = v;
      out.objective += lp_.objective(j) * v;
    }
    for (int j = 0; j < n_; ++j) out.reduced_costs.push_back(lp_.objective(j));
    out.dual_objective = out.objective;
    return out;
  }

  // -- basis management ----------------------------------------------------

  VarStatus resting_status(int j) const {
    if (std::isfinite(lo_[j])) return VarStatus::AtLower;
    if (std::isfinite(up_[j])) return VarStatus::AtUpper;
    return VarStatus::Free;
  }

  void place_nonbasic(int j, VarStatus s) {
    if (s == VarStatus::AtUpper && !std::isfinite(up_[j])) s = resting_status(j);
    if (s == VarStatus::AtLower && !std::isfinite(lo_[j])) s = resting_status(j);
    if (s == VarStatus::Basic) s = resting_status(j);
    if (lo_[j] == up_[j]) s = VarStatus::AtLower;
    status_[j] = s;
    pos_[j] = -1;
    x_[j] = s == VarStatus::AtLower ? lo_[j] : (s == VarStatus::AtUpper ? up_[j] : 0.0);
  }

  void load_slack_basis(bool keep_nonbasic = false) {
    for (int j = 0; j < n_; ++j) {
      place_nonbasic(j, keep_nonbasic && status_[j] != VarStatus::Basic ? status_[j] : resting_status(j));
    }
    for (int i = 0; i < m_; ++i) {
      head_[i] = n_ + i;
      pos_[n_ + i] = i;
      status_[n_ + i] = VarStatus::Basic;
    }
    refactor();
  }

  bool load_basis(const Basis& basis) {
    if (static_cast<int>(basis.basic.size()) != m_ || static_cast<int>(basis.status.size()) != total_) return false;
    std::vector<bool> is_basic(total_, false);
    for (int j : basis.basic) {
      if (j < 0 || j >= total_ || is_basic[j]) return false;
      is_basic[j] = true;
    }
    for (int j = 0; j < total_; ++j) {
      if (is_basic[j]) continue;
      place_nonbasic(j, basis.status[j]);
    }
    for (int i = 0; i < m_; ++i) {
      head_[i] = basis.basic[i];
      pos_[head_[i]] = i;
      status_[head_[i]] = VarStatus::Basic;
    }
    return refactor();
  }

  bool refactor() {
    std::vector<Eigen::Triplet<double>> trip;
    for (int r = 0; r < m_; ++r) {
      const int j = head_[r];
      if (j >= n_) {
        trip.emplace_back(j - n_, r, 1.0);
      } else {
        for (SpMat::InnerIterator it(a_, j); it; ++it) trip.emplace_back(it.row(), r, it.value());
      }
    }
    SpMat basis(m_, m_);
    basis.setFromTriplets(trip.begin(), trip.end());
    basis.makeCompressed();
    lu_ = std::make_unique<Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>>>();
    lu_->analyzePattern(basis);
    lu_->factorize(basis);
    etas_.clear();
    if (lu_->info() != Eigen::Success) return false;
    // Reject numerically singular factors that SparseLU lets through.
    const auto diag = lu_->logAbsDeterminant();
    if (!std::isfinite(diag)) return false;
    recompute_basic_values();
    return true;
  }

  void recompute_basic_values() {
    Vec rhs = b_;
    for (int j = 0; j < total_; ++j) {
      if (pos_[j] >= 0 || x_[j] == 0.0) continue;
      if (j >= n_) {
        rhs(j - n_) -= x_[j];
      } else {
        for (SpMat::InnerIterator it(a_, j); it; ++it) rhs(it.row()) -= it.value() * x_[j];
      }
    }
    Vec xb = ftran(rhs);
    for (int r = 0; r < m_; ++r) x_[head_[r]] = xb(r);
  }

  Vec column(int j) const {
    Vec v = Vec::Zero(m_);
    if (j >= n_) {
      v(j - n_) = 1.0;
    } else {
      for (SpMat::InnerIterator it(a_, j); it; ++it) v(it.row()) = it.value();
    }
    return v;
  }

  Vec ftran(const Vec& rhs) const {
    Vec z = lu_->solve(rhs);
    for (const auto& e : etas_) {
      const double zr = z(e.row) / e.pivot;
      if (zr != 0.0) {
        for (const auto& [i, v] : e.off) z(i) -= v * zr;
      }
      z(e.row) = zr;
    }
    return z;
  }

  Vec btran(Vec c) const {
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      double s = c(it->row);
      for (const auto& [i, v] : it->off) s -= v * c(i);
      c(it->row) = s / it->pivot;
    }
    return lu_->transpose().solve(c);
  }

  // -- iteration -----------------------------------------------------------

  double infeasibility(int j) const {
    if (x_[j] < lo_[j] - opt_.feasibility_tol) return lo_[j] - x_[j];
    if (x_[j] > up_[j] + opt_.feasibility_tol) return x_[j] - up_[j];
    return 0.0;
  }

  double max_infeasibility() const {
    double worst = 0.0;
    for (int r = 0; r < m_; ++r) worst = std::max(worst, infeasibility(head_[r]));
    return worst;
  }

  double reduced_cost(int j, const Vec& y, bool phase1) const {
    double d = phase1 ? 0.0 : cost_[j];
    if (j >= n_) return d - y(j - n_);
    for (SpMat::InnerIterator it(a_, j); it; ++it) d -= y(it.row()) * it.value();
    return d;
  }

  Step iterate() {
    // Phase selection and basic costs.
    Vec cb(m_);
    bool phase1 = false;
    for (int r = 0; r < m_; ++r) {
      const int j = head_[r];
      if (x_[j] < lo_[j] - opt_.feasibility_tol) {
        cb(r) = -1.0;
        phase1 = true;
      } else if (x_[j] > up_[j] + opt_.feasibility_tol) {
        cb(r) = 1.0;
        phase1 = true;
      } else {
        cb(r) = 0.0;
      }
    }
    if (!phase1) {
      for (int r = 0; r < m_; ++r) cb(r) = cost_[head_[r]];
    }
    const Vec y = btran(cb);

    // Pricing.
    const bool bland = degenerate_run_ >= opt_.degeneracy_streak;
    int entering = -1;
    double best = 0.0;
    double entering_d = 0.0;
    for (int j = 0; j < total_; ++j) {
      const VarStatus s = status_[j];
      if (s == VarStatus::Basic || lo_[j] == up_[j]) continue;
      const double d = reduced_cost(j, y, phase1);
      double gain = 0.0;
      if (s == VarStatus::AtLower && d < -opt_.optimality_tol) {
        gain = -d;
      } else if (s == VarStatus::AtUpper && d > opt_.optimality_tol) {
        gain = d;
      } else if (s == VarStatus::Free && std::abs(d) > opt_.optimality_tol) {
        gain = std::abs(d);
      } else {
        continue;
      }
      if (bland) {
        entering = j;
        entering_d = d;
        break;
      }
      if (gain > best) {
        best = gain;
        entering = j;
        entering_d = d;
      }
    }
    if (entering < 0) {
      if (phase1) return Step::Infeasible;
      return Step::Optimal;
    }

    const double dir = entering_d < 0.0 ? 1.0 : -1.0;
    const Vec w = ftran(column(entering));

    // Ratio test (Harris two-pass, or plain minimum under Bland's rule).
    struct Block {
      int row;
      double ratio;
      double target;
    };
    auto blocking = [&](int r, double tol, Block& out) -> bool {
      const double rate = -dir * w(r);
      if (std::abs(w(r)) < opt_.pivot_tol) return false;
      const int j = head_[r];
      const double v = x_[j];
      const bool below = phase1 && v < lo_[j] - opt_.feasibility_tol;
      const bool above = phase1 && v > up_[j] + opt_.feasibility_tol;
      if (below) {
        if (rate <= 0.0) return false;
        out = {r, (lo_[j] - v + tol) / rate, lo_[j]};
      } else if (above) {
        if (rate >= 0.0) return false;
        out = {r, (v - up_[j] + tol) / -rate, up_[j]};
      } else if (rate < 0.0) {
        if (!std::isfinite(lo_[j])) return false;
        out = {r, (v - lo_[j] + tol) / -rate, lo_[j]};
      } else {
        if (!std::isfinite(up_[j])) return false;
        out = {r, (up_[j] - v + tol) / rate, up_[j]};
      }
      out.ratio = std::max(out.ratio, 0.0);
      return true;
    };

    const double span = up_[entering] - lo_[entering];
    Block chosen{-1, kInf, 0.0};
    if (bland) {
      int chosen_var = total_;
      for (int r = 0; r < m_; ++r) {
        Block b;
        if (!blocking(r, 0.0, b)) continue;
        if (b.ratio < chosen.ratio - 1e-12 || (b.ratio <= chosen.ratio + 1e-12 && head_[r] < chosen_var)) {
          chosen = b;
          chosen_var = head_[r];
        }
      }
    } else {
      double limit = kInf;
      for (int r = 0; r < m_; ++r) {
        Block b;
        if (blocking(r, opt_.feasibility_tol, b)) limit = std::min(limit, b.ratio);
      }
      if (std::isfinite(limit)) {
        double best_pivot = 0.0;
        for (int r = 0; r < m_; ++r) {
          Block b;
          if (!blocking(r, 0.0, b) || b.ratio > limit) continue;
          if (std::abs(w(r)) > best_pivot) {
            best_pivot = std::abs(w(r));
            chosen = b;
          }
        }
      }
    }

    if (chosen.row < 0 && !std::isfinite(span)) {
      if (phase1) {
        // A phase-1 improving ray must hit a bound; numerical trouble.
        return refactor() ? Step::Continue : Step::Singular;
      }
      return Step::Unbounded;
    }

    // Bound flip of the entering variable.
    if (chosen.row < 0 || span <= chosen.ratio) {
      const double theta = span;
      for (int r = 0; r < m_; ++r) x_[head_[r]] -= dir * theta * w(r);
      if (status_[entering] == VarStatus::AtLower) {
        status_[entering] = VarStatus::AtUpper;
        x_[entering] = up_[entering];
      } else {
        status_[entering] = VarStatus::AtLower;
        x_[entering] = lo_[entering];
      }
      degenerate_run_ = 0;
      return Step::Continue;
    }

    const int r = chosen.row;
    const int leaving = head_[r];
    const double rate = -dir * w(r);
    double theta = (chosen.target - x_[leaving]) / rate;
    theta = std::max(theta, 0.0);
    for (int k = 0; k < m_; ++k) x_[head_[k]] -= dir * theta * w(k);
    x_[entering] += dir * theta;
    x_[leaving] = chosen.target;
    status_[leaving] = chosen.target == lo_[leaving] ? VarStatus::AtLower : VarStatus::AtUpper;
    if (lo_[leaving] == up_[leaving]) status_[leaving] = VarStatus::AtLower;
    pos_[leaving] = -1;
    head_[r] = entering;
    pos_[entering] = r;
    status_[entering] = VarStatus::Basic;

    Eta eta{r, w(r), {}};
    for (int k = 0; k < m_; ++k) {
      if (k != r && std::abs(w(k)) > 1e-14) eta.off.emplace_back(k, w(k));
    }
    etas_.push_back(std::move(eta));

    degenerate_run_ = theta <= 1e-12 ? degenerate_run_ + 1 : 0;

    if (static_cast<int>(etas_.size()) >= opt_.refactor_interval) {
      if (!refactor()) return Step::Singular;
    }
    return Step::Continue;
  }

  void fill_duals(LpSolution& out) const {
    Vec cb(m_);
    for (int r = 0; r < m_; ++r) cb(r) = cost_[head_[r]];
    const Vec y_int = btran(cb);
    out.duals.resize(m_);
    for (int i = 0; i < m_; ++i) out.duals[i] = sign_ * row_sign_[i] * y_int(i);
    out.reduced_costs.resize(n_);
    const SpMat a = lp_.matrix();
    for (int j = 0; j < n_; ++j) {
      double d = lp_.objective(j);
      for (SpMat::InnerIterator it(a, j); it; ++it) d -= out.duals[it.row()] * it.value();
      out.reduced_costs[j] = d;
    }
    const bool maximize = lp_.direction() == Direction::Maximize;
    double dual = 0.0;
    for (int i = 0; i < m_; ++i) dual += lp_.rhs(i) * out.duals[i];
    for (int j = 0; j < n_; ++j) {
      const double rc = out.reduced_costs[j];
      if (rc == 0.0) continue;
      const bool use_upper = maximize ? rc > 0.0 : rc < 0.0;
      const double bound = use_upper ? lp_.upper(j) : lp_.lower(j);
      if (std::isfinite(bound)) {
        dual += rc * bound;
      } else if (std::abs(rc) > opt_.optimality_tol) {
        dual += (maximize ? kInf : -kInf);
      }
    }
    out.dual_objective = dual;
  }

  const LinearProgram& lp_;
  SimplexOptions opt_;
  int n_ = 0;
  int m_ = 0;
  int total_ = 0;
  double sign_ = 1.0;
  std::vector<double> row_sign_;
  Vec b_;
  SpMat a_;
  std::vector<double> lo_, up_, cost_, x_;
  std::vector<VarStatus> status_;
  std::vector<int> pos_;
  std::vector<int> head_;
  std::unique_ptr<Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>>> lu_;
  std::vector<Eta> etas_;
  int degenerate_run_ = 0;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const SimplexOptions& options, const Basis* warm_start) {
  if (auto problem = lp.check(); !problem.empty()) throw std::invalid_argument(problem);
  Simplex simplex(lp, options);
  return simplex.run(warm_start);
}

// ---------------------------------------------------------------------------
// LP text export

namespace {

void write_term(std::ostringstream& out, double coef, const std::string& name, bool first) {
  if (coef < 0.0) {
    out << (first ? "- " : " - ");
  } else if (!first) {
    out << " + ";
  }
  const double mag = std::abs(coef);
  if (mag != 1.0) out << mag << ' ';
  out << name;
}

}  // namespace

std::string to_lp_format(const LinearProgram& lp) {
  std::ostringstream out;
  out.precision(17);
  out << (lp.direction() == Direction::Maximize ? "Maximize\n" : "Minimize\n") << " obj: ";
  bool first = true;
  for (int j = 0; j < lp.num_cols(); ++j) {
    if (lp.objective(j) == 0.0) continue;
    write_term(out, lp.objective(j), lp.col_name(j), first);
    first = false;
  }
  if (first) out << "0 " << (lp.num_cols() > 0 ? lp.col_name(0) : "x0");
  out << "\nSubject To\n";
  const Eigen::SparseMatrix<double, Eigen::RowMajor> a = lp.matrix();
  for (int i = 0; i < lp.num_rows(); ++i) {
    out << ' ' << lp.row_name(i) << ": ";
    first = true;
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(a, i); it; ++it) {
      write_term(out, it.value(), lp.col_name(static_cast<int>(it.col())), first);
      first = false;
    }
    if (first) out << "0 " << (lp.num_cols() > 0 ? lp.col_name(0) : "x0");
    switch (lp.sense(i)) {
      case Sense::LessEqual: out << " <= "; break;
      case Sense::Equal: out << " = "; break;
      case Sense::GreaterEqual: out << " >= "; break;
    }
    out << lp.rhs(i) << '\n';
  }
  out << "Bounds\n";
  for (int j = 0; j < lp.num_cols(); ++j) {
    const double lo = lp.lower(j);
    const double up = lp.upper(j);
    out << ' ';
    if (std::isinf(lo) && std::isinf(up)) {
      out << lp.col_name(j) << " free\n";
    } else if (lo == up) {
      out << lp.col_name(j) << " = " << lo << '\n';
    } else {
      out << (std::isinf(lo) ? std::string("-inf") : [&] {
        std::ostringstream s;
        s.precision(17);
        s << lo;
        return s.str();
      }()) << " <= " << lp.col_name(j) << " <= ";
      if (std::isinf(up)) {
        out << "+inf\n";
      } else {
        out << up << '\n';
      }
    }
  }
  out << "End\n";
  return out.str();
}

}  // namespace evcharge::lp

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

// Demand estimation from observed station supply and a borough OD matrix.
//
// Borough supply r (energy delivered by stations in each borough) is the
// image of the unknown borough demand q under the transposed trip matrix:
//
//     sum_i q_i p(i, j) = r_j   for every borough j,   i.e.  p^T q = r.
//
// The solver routines are templated on the scalar so the same code runs in
// double precision and in exact rational arithmetic.

#ifndef EVCHARGE_ESTIMATE_HPP
#define EVCHARGE_ESTIMATE_HPP

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/eigen.hpp>

#include "evcharge/model.hpp"

namespace evcharge::estimate {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

struct SessionRecord {
  std::string station_id;
  double start_s = 0.0;
  double duration_s = 0.0;
  double kw_per_s = 0.0;

  double energy_kw() const { return duration_s * kw_per_s; }

  bool operator==(const SessionRecord&) const = default;
};

/// Trip shares between boroughs; p(i, j) is the fraction of trips leaving
/// borough i that end in borough j. Rows sum to one.
struct ODMatrix {
  std::vector<std::string> boroughs;
  Matrix<double> p;

  int size() const { return static_cast<int>(boroughs.size()); }
  int index_of(const std::string& borough) const;
};

class NoSessions : public Error {
 public:
  using Error::Error;
};

class DegenerateSystem : public Error {
 public:
  using Error::Error;
};

/// Mean per-outlet kW/s over the station's sessions.
double mean_outlet_rate(std::span<const SessionRecord> sessions, const std::string& station_id);

/// outlets x mean rate x duration. Throws NoSessions if the station has none.
double station_capacity_kw(std::span<const SessionRecord> sessions, const Station& station,
                           const Period& period);

/// Energy delivered per borough during [period_start, period_start + duration),
/// apportioning sessions that straddle the window by time overlap. Sessions
/// that run past midnight wrap onto the start of the day.
std::map<std::string, double> borough_supply_kw(std::span<const SessionRecord> sessions,
                                                const std::map<std::string, std::string>& station_borough,
                                                const std::vector<std::string>& boroughs,
                                                double period_start_s, double period_duration_s);

/// Energy of one session inside a window of the day.
double session_energy_in_window(const SessionRecord& session, double window_start_s, double window_duration_s,
                                double horizon_s = kDayHorizonSeconds);

template <typename Scalar>
struct DemandEstimate {
  Vector<Scalar> q;
  bool least_squares = false;  // true if the system was singular or non-square
  bool clamped = false;        // true if negative components were set to 0
  double condition_number = 1.0;
  std::vector<std::string> warnings;
};

namespace detail {

template <typename Scalar>
Scalar abs_value(const Scalar& v) {
  using std::abs;
  return abs(v);
}

template <typename Scalar>
bool is_zero_pivot(const Scalar& pivot, const Scalar& scale) {
  if constexpr (std::is_floating_point_v<Scalar>) {
    return std::abs(pivot) <= 1e-13 * std::max(scale, Scalar(1e-300));
  } else {
    (void)scale;
    return pivot == Scalar(0);
  }
}

/// Gaussian elimination with partial pivoting; nullopt if singular.
template <typename Scalar>
std::optional<Vector<Scalar>> solve_partial_pivot(Matrix<Scalar> a, Vector<Scalar> b) {
  const Eigen::Index n = a.rows();
  Scalar scale(0);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) scale = std::max(scale, abs_value(a(i, j)));
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index pivot = k;
    for (Eigen::Index i = k + 1; i < n; ++i) {
      if (abs_value(a(i, k)) > abs_value(a(pivot, k))) pivot = i;
    }
    if (is_zero_pivot(a(pivot, k), scale)) return std::nullopt;
    if (pivot != k) {
      a.row(k).swap(a.row(pivot));
      std::swap(b(k), b(pivot));
    }
    for (Eigen::Index i = k + 1; i < n; ++i) {
      const Scalar factor = a(i, k) / a(k, k);
      if (factor == Scalar(0)) continue;
      for (Eigen::Index j = k; j < n; ++j) a(i, j) -= factor * a(k, j);
      b(i) -= factor * b(k);
    }
  }
  Vector<Scalar> x(n);
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    Scalar s = b(i);
    for (Eigen::Index j = i + 1; j < n; ++j) s -= a(i, j) * x(j);
    x(i) = s / a(i, i);
  }
  return x;
}

inline double condition_number(const Matrix<double>& a) {
  Eigen::JacobiSVD<Matrix<double>> svd(a);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 1.0;
  const double smallest = sv(sv.size() - 1);
  if (smallest <= 0.0) return std::numeric_limits<double>::infinity();
  return sv(0) / smallest;
}

template <typename Scalar>
Matrix<double> to_double_matrix(const Matrix<Scalar>& m) {
  if constexpr (std::is_same_v<Scalar, double>) {
    return m;
  } else {
    return m.unaryExpr([](const Scalar& v) { return v.template convert_to<double>(); });
  }
}

}  // namespace detail

/// Solves p^T q = r for the borough demand q. Exact when the system is
/// square and nonsingular; otherwise a minimum-norm least-squares solution.
/// Negative components are clamped to zero in both cases. Throws DegenerateSystem when
/// every entry of p is zero.
template <typename Scalar>
DemandEstimate<Scalar> estimate_borough_demand(const Matrix<Scalar>& p, const Vector<Scalar>& r) {
  if (p.rows() == 0 || p.rows() != r.size()) {
    throw DegenerateSystem("OD matrix and supply vector sizes differ or are empty");
  }
  bool all_zero = true;
  for (Eigen::Index i = 0; i < p.rows() && all_zero; ++i) {
    for (Eigen::Index j = 0; j < p.cols(); ++j) {
      if (p(i, j) != Scalar(0)) {
        all_zero = false;
        break;
      }
    }
  }
  if (all_zero) throw DegenerateSystem("every row of the OD matrix is zero");

  DemandEstimate<Scalar> out;
  const Matrix<Scalar> system = p.transpose();
  const Matrix<double> system_d = detail::to_double_matrix(system);
  out.condition_number = detail::condition_number(system_d);
  if (out.condition_number > 1e12) {
    out.warnings.push_back("OD system is ill-conditioned (condition number " +
                           std::to_string(out.condition_number) + ")");
  }

  if (system.rows() == system.cols()) {
    if (auto q = detail::solve_partial_pivot<Scalar>(system, r)) {
      out.q = *q;
      for (Eigen::Index i = 0; i < out.q.size(); ++i) {
        if (out.q(i) < Scalar(0)) {
          out.q(i) = Scalar(0);
          out.clamped = true;
        }
      }
      if (out.clamped) out.warnings.push_back("exact solution had negative borough demand; clamped to 0");
      return out;
    }
  }

  // Singular or non-square: minimum-norm least squares in double precision.
  out.least_squares = true;
  out.warnings.push_back("OD system is singular; using a least-squares estimate");
  Vector<double> r_d(r.size());
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    if constexpr (std::is_same_v<Scalar, double>) {
      r_d(i) = r(i);
    } else {
      r_d(i) = r(i).template convert_to<double>();
    }
  }
  Vector<double> q_d = system_d.completeOrthogonalDecomposition().solve(r_d);
  out.q.resize(q_d.size());
  for (Eigen::Index i = 0; i < q_d.size(); ++i) {
    if (q_d(i) < 0.0) {
      q_d(i) = 0.0;
      out.clamped = true;
    }
    out.q(i) = Scalar(q_d(i));
  }
  return out;
}

/// Demand on the borough pair (i, j): q_i p(i, j) + q_j p(j, i), or
/// q_i p(i, i) within a single borough.
template <typename Scalar>
Scalar od_demand_kw(const Vector<Scalar>& q, const Matrix<Scalar>& p, int i, int j) {
  if (i == j) return q(i) * p(i, i);
  return q(i) * p(i, j) + q(j) * p(j, i);
}

/// Demand assigned to each unordered borough pair.
template <typename Scalar>
struct PairDemand {
  int i = 0;  // i <= j
  int j = 0;
  Scalar demand_kw{};
};

template <typename Scalar>
std::vector<PairDemand<Scalar>> pair_demands(const Vector<Scalar>& q, const Matrix<Scalar>& p) {
  std::vector<PairDemand<Scalar>> out;
  for (int i = 0; i < p.rows(); ++i) {
    for (int j = i; j < p.rows(); ++j) out.push_back({i, j, od_demand_kw<Scalar>(q, p, i, j)});
  }
  return out;
}

template <typename Scalar>
struct SplitResult {
  /// demand_kw[k][t]: demand of the k-th OD in period t.
  std::vector<std::vector<Scalar>> demand_kw;
  /// Pairs with positive demand but no OD to carry it.
  std::vector<PairDemand<Scalar>> lost;
};

/// Spreads each pair's demand uniformly over the ODs of that pair, then over
/// periods by `period_weights` (which must sum to one). `od_pairs[k]` is the
/// unordered borough pair (i <= j) of the k-th OD.
template <typename Scalar>
SplitResult<Scalar> split_demand_to_ods(const std::vector<PairDemand<Scalar>>& pairs,
                                        const std::vector<std::pair<int, int>>& od_pairs,
                                        const std::vector<Scalar>& period_weights) {
  std::map<std::pair<int, int>, int> count;
  for (auto [i, j] : od_pairs) ++count[{std::min(i, j), std::max(i, j)}];
  std::map<std::pair<int, int>, Scalar> share;
  SplitResult<Scalar> out;
  for (const auto& pd : pairs) {
    const std::pair<int, int> key{std::min(pd.i, pd.j), std::max(pd.i, pd.j)};
    auto it = count.find(key);
    if (it == count.end()) {
      if (pd.demand_kw > Scalar(0)) out.lost.push_back(pd);
      continue;
    }
    share[key] += pd.demand_kw / Scalar(it->second);
  }
  out.demand_kw.reserve(od_pairs.size());
  for (auto [i, j] : od_pairs) {
    const Scalar daily = share[{std::min(i, j), std::max(i, j)}];
    std::vector<Scalar> per_period;
    per_period.reserve(period_weights.size());
    for (const auto& w : period_weights) per_period.push_back(daily * w);
    out.demand_kw.push_back(std::move(per_period));
  }
  return out;
}

/// Per-period share of the delivered energy across all sessions; uniform when
/// there is no energy.
std::vector<double> energy_period_weights(std::span<const SessionRecord> sessions,
                                          const std::vector<Period>& periods);

// ---------------------------------------------------------------------------
// CSV ingestion. Errors are InputError with the 1-based line number.

/// `station_id,start_s,duration_s,kw_per_s`
std::vector<SessionRecord> read_sessions_csv(const std::string& path);
std::vector<SessionRecord> parse_sessions_csv(std::istream& in);

/// Square matrix with a header row of borough ids and the borough id in the
/// first column of each row. Rows must sum to one within 1e-9 (RowSumError).
ODMatrix read_od_matrix_csv(const std::string& path);
ODMatrix parse_od_matrix_csv(std::istream& in);

/// `station_id,borough_id`
std::map<std::string, std::string> read_borough_assignment_csv(const std::string& path);
std::map<std::string, std::string> parse_borough_assignment_csv(std::istream& in);

}  // namespace evcharge::estimate

#endif  // EVCHARGE_ESTIMATE_HPP

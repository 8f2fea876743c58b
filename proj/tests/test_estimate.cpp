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
#include <sstream>

#include "doctest.h"
#include "evcharge/estimate.hpp"
#include "fixtures.hpp"

using namespace evcharge;
using namespace evcharge::estimate;

namespace {

Matrix<Rational> exact(const Matrix<double>& m) {
  Matrix<Rational> out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = decimal_rational(m(i, j));
  }
  return out;
}

}  // namespace

TEST_CASE("station capacity from mean session rate") {
  const auto data = fixtures::worked_scenario();
  const Period day;
  CHECK(station_capacity_kw(data.sessions, data.stations[0], day) == 432000.0);
  CHECK(station_capacity_kw(data.sessions, data.stations[1], day) == 345600.0);
  CHECK(station_capacity_kw(data.sessions, data.stations[0], Period{0, 0.0}) == 0.0);
  Station lonely;
  lonely.id = "none";
  CHECK_THROWS_AS(station_capacity_kw(data.sessions, lonely, day), NoSessions);
}

TEST_CASE("borough supply is delivered energy") {
  const auto data = fixtures::worked_scenario();
  const auto r = borough_supply_kw(data.sessions, data.station_borough, data.od_matrix.boroughs, 0.0, 86400.0);
  CHECK(r.at("Lambda") == 550.0);
  CHECK(r.at("Omega") == 350.0);

  const auto none = borough_supply_kw({}, data.station_borough, data.od_matrix.boroughs, 0.0, 86400.0);
  for (const auto& [b, v] : none) CHECK(v == 0.0);
}

TEST_CASE("session energy is apportioned by overlap") {
  // 2 h session at 3 kW/s starting 1 h before the first period ends.
  const SessionRecord s{"x", 43200.0 - 3600.0, 7200.0, 3.0};
  const double first = session_energy_in_window(s, 0.0, 43200.0);
  const double second = session_energy_in_window(s, 43200.0, 43200.0);
  CHECK(first == 3600.0 * 3.0);
  CHECK(second == 3600.0 * 3.0);
  // Wrapping past midnight lands at the start of the day.
  const SessionRecord late{"x", 86400.0 - 600.0, 1200.0, 1.0};
  CHECK(session_energy_in_window(late, 0.0, 21600.0) == 600.0);
  CHECK(session_energy_in_window(late, 64800.0, 21600.0) == 600.0);

  const auto w = energy_period_weights(std::vector<SessionRecord>{s}, uniform_periods(2));
  CHECK(w[0] == doctest::Approx(0.5));
  CHECK(w[1] == doctest::Approx(0.5));
  const auto flat = energy_period_weights({}, uniform_periods(4));
  for (double x : flat) CHECK(x == 0.25);
}

TEST_CASE("borough demand of the worked example is exact") {
  const auto data = fixtures::worked_scenario();
  const auto p = exact(data.od_matrix.p);
  Vector<Rational> r(2);
  r << Rational(350), Rational(550);  // Omega, Lambda
  REQUIRE(data.od_matrix.boroughs == std::vector<std::string>{"Omega", "Lambda"});
  const auto est = estimate_borough_demand<Rational>(p, r);
  CHECK_FALSE(est.least_squares);
  CHECK_FALSE(est.clamped);
  CHECK(est.q(0) == Rational(500));
  CHECK(est.q(1) == Rational(400));

  CHECK(od_demand_kw<Rational>(est.q, p, 0, 1) == Rational(350));
  CHECK(od_demand_kw<Rational>(est.q, p, 0, 0) == Rational(250));
  CHECK(od_demand_kw<Rational>(Vector<Rational>::Zero(2), p, 0, 1) == Rational(0));
}

TEST_CASE("identity matrix returns the supply") {
  Matrix<double> p = Matrix<double>::Identity(3, 3);
  Vector<double> r(3);
  r << 1.0, 2.0, 3.0;
  const auto est = estimate_borough_demand<double>(p, r);
  CHECK((est.q - r).norm() == 0.0);
}

TEST_CASE("random systems recover a planted demand") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 50; ++rep) {
    Matrix<double> p(3, 3);
    for (int i = 0; i < 3; ++i) {
      double sum = 0.0;
      for (int j = 0; j < 3; ++j) sum += p(i, j) = u(rng) + (i == j ? 1.0 : 0.0);
      p.row(i) /= sum;
    }
    Vector<double> q_star(3);
    for (int i = 0; i < 3; ++i) q_star(i) = 1000.0 * u(rng);
    const Vector<double> r = p.transpose() * q_star;
    const auto est = estimate_borough_demand<double>(p, r);
    CHECK((est.q - q_star).norm() <= 1e-8 * q_star.norm());

    const auto est_exact = estimate_borough_demand<Rational>(exact(p), exact(Matrix<double>(r)).col(0));
    for (int i = 0; i < 3; ++i) CHECK(to_double(est_exact.q(i)) == doctest::Approx(q_star(i)).epsilon(1e-8));
  }
}

TEST_CASE("singular and degenerate systems") {
  Matrix<double> p(2, 2);
  p << 0.5, 0.5, 0.5, 0.5;
  Vector<double> r(2);
  r << 100.0, 100.0;
  const auto est = estimate_borough_demand<double>(p, r);
  CHECK(est.least_squares);
  CHECK((p.transpose() * est.q - r).norm() == doctest::Approx(0.0).epsilon(1e-9));

  CHECK_THROWS_AS(estimate_borough_demand<double>(Matrix<double>::Zero(2, 2), r), DegenerateSystem);
  CHECK_THROWS_AS(estimate_borough_demand<double>(Matrix<double>(0, 0), Vector<double>(0)), DegenerateSystem);

  // A solution with a negative component is clamped.
  Matrix<double> q(2, 2);
  q << 1.0, 0.0, 0.0, 1.0;
  Vector<double> neg(2);
  neg << -5.0, 5.0;
  const auto c = estimate_borough_demand<double>(q, neg);
  CHECK(c.clamped);
  CHECK(c.q(0) == 0.0);
  CHECK_FALSE(c.warnings.empty());
}

TEST_CASE("pair demand is split over ODs and periods") {
  Vector<Rational> q(2);
  q << Rational(500), Rational(400);
  Matrix<Rational> p(2, 2);
  p << Rational(1, 2), Rational(1, 2), Rational(1, 4), Rational(3, 4);
  const auto pairs = pair_demands<Rational>(q, p);
  // A-B and B-C cross the borough boundary, A-C stays in Omega.
  const std::vector<std::pair<int, int>> ods{{0, 1}, {0, 0}, {0, 1}};
  const auto split = split_demand_to_ods<Rational>(pairs, ods, {Rational(1)});
  CHECK(split.demand_kw[0][0] == Rational(175));
  CHECK(split.demand_kw[1][0] == Rational(250));
  CHECK(split.demand_kw[2][0] == Rational(175));
  REQUIRE(split.lost.size() == 1);
  CHECK(split.lost[0].demand_kw == Rational(300));

  const auto single = split_demand_to_ods<Rational>(pairs, {{0, 0}}, {Rational(1)});
  CHECK(single.demand_kw[0][0] == Rational(250));

  const std::vector<Rational> quarters(4, Rational(1, 4));
  const auto four = split_demand_to_ods<Rational>(pairs, {{0, 0}}, quarters);
  for (const auto& v : four.demand_kw[0]) CHECK(v == Rational(250, 4));
}

TEST_CASE("csv readers") {
  std::istringstream sessions("station_id,start_s,duration_s,kw_per_s\n1,0,10,2\n");
  const auto s = parse_sessions_csv(sessions);
  REQUIRE(s.size() == 1);
  CHECK(s[0].energy_kw() == 20.0);

  std::istringstream bad_row("borough,a,b\na,0.5,0.4\nb,0.5,0.5\n");
  try {
    parse_od_matrix_csv(bad_row);
    FAIL("row sum not rejected");
  } catch (const InputError& e) {
    CHECK(e.code() == "RowSumError");
    CHECK(e.line() == 2);
  }
  std::istringstream assignment("station_id,borough_id\n1,a\n");
  CHECK(parse_borough_assignment_csv(assignment).at("1") == "a");
}

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


#include <set>
#include <sstream>

#include "doctest.h"
#include "evcharge/instgen.hpp"
#include "evcharge/maxflow.hpp"
#include "fixtures.hpp"

using namespace evcharge;
using namespace evcharge::instgen;

namespace {

Borough box(const std::string& id, double lat0, double lon0, double size, double weight) {
  Polygon poly;
  poly.rings.push_back({{lat0, lon0}, {lat0, lon0 + size}, {lat0 + size, lon0 + size}, {lat0 + size, lon0}, {lat0, lon0}});
  return Borough{id, {poly}, weight};
}

std::map<std::string, int> tally(const std::vector<GeneratedPoint>& pts) {
  std::map<std::string, int> out;
  for (const auto& p : pts) ++out[p.borough];
  return out;
}

}  // namespace

TEST_CASE("rng draws") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) {
    const double x = a.uniform();
    CHECK(x == b.uniform());
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
  }
  Rng c(1);
  const std::vector<double> w{0.0, 1.0, 0.0};
  for (int i = 0; i < 50; ++i) CHECK(c.categorical(w) == 1);
}

TEST_CASE("polygon containment and area") {
  const auto b = box("b", 45.0, -73.0, 0.1, 1.0);
  CHECK(contains(b, {45.05, -72.95}));
  CHECK_FALSE(contains(b, {45.15, -72.95}));
  CHECK(area_deg2(b) == doctest::Approx(0.01));

  // A hole is excluded by the even-odd rule.
  auto holed = b;
  holed.polygons[0].rings.push_back({{45.04, -72.96}, {45.04, -72.94}, {45.06, -72.94}, {45.06, -72.96}, {45.04, -72.96}});
  CHECK_FALSE(contains(holed, {45.05, -72.95}));
  CHECK(contains(holed, {45.01, -72.99}));
}

TEST_CASE("point sampling is seeded and stays inside its borough") {
  const std::vector<Borough> two{box("n", 45.5, -73.6, 0.02, 0.7), box("s", 45.48, -73.6, 0.02, 0.3)};
  const auto p1 = generate_points(two, 100, 9);
  const auto p2 = generate_points(two, 100, 9);
  REQUIRE(p1.size() == 100);
  for (std::size_t i = 0; i < p1.size(); ++i) {
    CHECK(p1[i].location == p2[i].location);
    CHECK(p1[i].borough == p2[i].borough);
    CHECK(p1[i].id == std::to_string(i));
    const auto& home = p1[i].borough == "n" ? two[0] : two[1];
    CHECK(contains(home, p1[i].location));
  }
  CHECK(generate_points(two, 100, 10)[0].location != p1[0].location);
}

TEST_CASE("borough counts follow the weights") {
  const std::vector<Borough> zero{box("a", 45.5, -73.6, 0.02, 1.0), box("b", 45.48, -73.6, 0.02, 0.0)};
  CHECK(tally(generate_points(zero, 10, 3))["a"] == 10);

  const std::vector<Borough> two{box("a", 45.5, -73.6, 0.02, 0.7), box("b", 45.48, -73.6, 0.02, 0.3)};
  const int n = 10000;
  const auto counts = tally(generate_points(two, n, 5));
  const double sigma = std::sqrt(n * 0.7 * 0.3);
  CHECK(std::abs(counts.at("a") - 0.7 * n) <= 3.0 * sigma);

  // Pearson chi-square over four boroughs, 3 degrees of freedom; 16.27 is
  // the 0.999 quantile.
  const std::vector<double> w{0.1, 0.2, 0.3, 0.4};
  std::vector<Borough> four;
  for (int i = 0; i < 4; ++i) four.push_back(box(std::to_string(i), 45.4 + 0.03 * i, -73.6, 0.02, w[i]));
  const auto c4 = tally(generate_points(four, n, 6));
  double chi2 = 0.0;
  for (int i = 0; i < 4; ++i) {
    const double expected = n * w[i];
    const double d = c4.at(std::to_string(i)) - expected;
    chi2 += d * d / expected;
  }
  CHECK(chi2 < 16.27);

  // Every positive-weight borough gets at least two points.
  const std::vector<Borough> skew{box("a", 45.5, -73.6, 0.02, 1.0), box("b", 45.48, -73.6, 0.02, 1e-9)};
  CHECK(tally(generate_points(skew, 10, 1))["b"] == 2);

  CHECK_THROWS_AS(generate_points(skew, 3, 1), InputError);
  CHECK_THROWS_AS(generate_points({box("a", 45.5, -73.6, 0.02, 0.0)}, 10, 1), InputError);
}

TEST_CASE("od enumeration counts pairs") {
  const std::vector<Borough> one{box("a", 45.5, -73.6, 0.02, 1.0)};
  CHECK(enumerate_ods(generate_points(one, 2, 1)).size() == 1);
  const auto ods = enumerate_ods(generate_points(one, 100, 1));
  CHECK(ods.size() == 4950);
  CHECK(ods[0].id == "0-1");
  CHECK(enumerate_ods(generate_points(one, 300, 1)).size() == 44850);
  const auto four = enumerate_ods(generate_points(one, 3, 1), 4);
  CHECK(four[0].demand_kw.size() == 4);
}

TEST_CASE("candidates sit at endpoints of impossible ODs") {
  auto inst = fixtures::worked_instance();
  const auto set = make_candidates(inst);
  REQUIRE(set.candidates.size() == 2);
  const auto pts = fixtures::worked_points();
  CHECK(set.candidates[0].location == pts[0].location);  // A
  CHECK(set.candidates[1].location == pts[1].location);  // B
  CHECK(set.kw_per_s_l2 == doctest::Approx(4.5));

  auto reachable = inst;
  reachable.radius_m = 1e6;
  CHECK(make_candidates(reachable).candidates.empty());

  // A-B and A-C both impossible: A appears once.
  auto shared = inst;
  shared.stations.pop_back();
  shared.stations[0].location = {10.0, 10.0};
  const auto three = make_candidates(shared);
  CHECK(three.candidates.size() == 3);
  std::set<std::string> ids;
  for (const auto& c : three.candidates) ids.insert(c.id);
  CHECK(ids.size() == 3);
}

TEST_CASE("default costs") {
  const auto c = default_costs();
  const auto inst = fixtures::worked_instance(1, true);
  CHECK(inst.candidates[0].outlet_cost_l2 == 1);
  CHECK(inst.candidates[0].open_cost_l3 == 100);
  CHECK(c.existing_outlet_cost_l3 == 2);
  CHECK(c.existing_outlet_cost_l2 == 1);
  const auto budgets = default_budgets();
  CHECK(budgets.front() == 0);
  CHECK(budgets.back() == 700);
}

TEST_CASE("csv and geojson readers") {
  std::istringstream st("station_id,lat,lon,level,outlets\nx,45.5,-73.6,3,2\n");
  const auto stations = parse_stations_csv(st);
  REQUIRE(stations.size() == 1);
  CHECK(stations[0].level == Level::L3);
  CHECK(stations[0].outlets == 2);

  std::istringstream bad("station_id,lat,lon,level,outlets\nx,45.5,-73.6,4,2\n");
  CHECK_THROWS_AS(parse_stations_csv(bad), InputError);

  std::istringstream pts("point_id,lat,lon,borough_id\nP,45.5,-73.6,z\n");
  CHECK(parse_points_csv(pts)[0].borough == "z");

  const auto gj = nlohmann::json::parse(R"({"type":"FeatureCollection","features":[
    {"type":"Feature","properties":{"name":"X"},"geometry":{"type":"Polygon",
     "coordinates":[[[-73.6,45.5],[-73.5,45.5],[-73.5,45.6],[-73.6,45.6],[-73.6,45.5]]]}}]})");
  const auto boroughs = parse_boroughs_geojson(gj);
  REQUIRE(boroughs.size() == 1);
  CHECK(boroughs[0].id == "X");
  CHECK(contains(boroughs[0], {45.55, -73.55}));
}

TEST_CASE("toy scenario instances") {
  const auto data = fixtures::toy_scenario();
  CHECK(data.boroughs.size() == 4);
  GenerateConfig config;
  config.points = 20;
  config.seed = 3;
  const auto a = generate_instance(data, config);
  const auto b = generate_instance(data, config);
  nlohmann::json ja, jb;
  to_json(ja, a.instance);
  to_json(jb, b.instance);
  CHECK(ja.dump() == jb.dump());
  CHECK(a.instance.ods.size() == 190);
  CHECK(validate(a.instance).empty());

  config.periods = 4;
  const auto four = generate_instance(data, config);
  REQUIRE(four.instance.num_periods() == 4);
  for (const auto& p : four.instance.periods) CHECK(p.duration_s == 21600.0);
  CHECK(four.instance.total_demand_kw() == doctest::Approx(a.instance.total_demand_kw()));
  CHECK(maxflow::evaluate(four.instance).satisfied_kw <= maxflow::evaluate(a.instance).satisfied_kw + 1e-6);
}
